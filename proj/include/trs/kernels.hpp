// Mat-vec kernels. Every kernel comes in two flavours: an OpenMP row-parallel
// version used by the solvers and a plain serial loop kept as the reference
// for tests and the benchmark. Both compute each output row with the same
// left-to-right summation, so their results are bitwise identical.
#pragma once

#include <cstddef>
#include <span>

namespace trs::kernels {

/// Rows below this count run serially even in the parallel kernels.
inline constexpr std::size_t kParallelRowThreshold = 256;

/// y = M x for a dense row-major n x n matrix.
void dense_matvec(std::span<const double> m, std::size_t n, std::span<const double> x,
                  std::span<double> y);
void dense_matvec_serial(std::span<const double> m, std::size_t n, std::span<const double> x,
                         std::span<double> y);

/// Compressed sparse rows: row_ptr has n+1 entries.
struct CsrView {
  std::size_t n = 0;
  std::span<const std::size_t> row_ptr;
  std::span<const std::size_t> col;
  std::span<const double> val;
};

/// y = M x for a CSR matrix.
void csr_matvec(const CsrView& m, std::span<const double> x, std::span<double> y);
void csr_matvec_serial(const CsrView& m, std::span<const double> x, std::span<double> y);

}  // namespace trs::kernels
