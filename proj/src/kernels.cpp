#include "trs/kernels.hpp"

#include <cstdint>

namespace trs::kernels {

namespace {

inline double dense_row(std::span<const double> m, std::size_t n, std::size_t i,
                        std::span<const double> x) {
  const double* row = m.data() + i * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
  return acc;
}

inline double csr_row(const CsrView& m, std::size_t i, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) acc += m.val[p] * x[m.col[p]];
  return acc;
}

}  // namespace

void dense_matvec(std::span<const double> m, std::size_t n, std::span<const double> x,
                  std::span<double> y) {
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (std::int64_t i = 0; i < rows; ++i)
    y[static_cast<std::size_t>(i)] = dense_row(m, n, static_cast<std::size_t>(i), x);
}

void dense_matvec_serial(std::span<const double> m, std::size_t n, std::span<const double> x,
                         std::span<double> y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dense_row(m, n, i, x);
}

void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y) {
  const auto rows = static_cast<std::int64_t>(m.n);
#pragma omp parallel for schedule(static) if (m.n >= kParallelRowThreshold)
  for (std::int64_t i = 0; i < rows; ++i)
    y[static_cast<std::size_t>(i)] = csr_row(m, static_cast<std::size_t>(i), x);
}

void csr_matvec_serial(const CsrView& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m.n; ++i) y[i] = csr_row(m, i, x);
}

}  // namespace trs::kernels
