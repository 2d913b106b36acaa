#include "trs/symmetric_operator.hpp"

#include "trs/errors.hpp"
#include "trs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <utility>

namespace trs {

std::size_t dense_limit() {
  if (const char* env = std::getenv("TRS_DENSE_LIMIT")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDenseLimit;
}

double Spectrum::norm() const {
  if (eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(lambda_min()), std::abs(lambda_max()));
}

SymmetricOperator SymmetricOperator::dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("dense operator must be square");
  if (m.rows() == 0) throw InputError("operator dimension must be positive");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw InputError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
  SymmetricOperator op;
  op.n_ = static_cast<std::size_t>(m.rows());
  op.dense_ = 0.5 * (m + m.transpose());
  return op;
}

SymmetricOperator SymmetricOperator::sparse(std::size_t n, std::vector<Triplet> lower) {
  if (n == 0) throw InputError("operator dimension must be positive");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& t : lower) {
    if (t.row >= n || t.col >= n)
      throw InputError("triplet index out of range: (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ")");
    if (t.row < t.col) throw InputError("sparse triplets must satisfy row >= col");
    if (!seen.emplace(t.row, t.col).second)
      throw InputError("duplicate triplet (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ")");
  }
  std::sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  // Mirror into full rows, columns ascending within each row.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  for (const auto& t : lower) {
    rows[t.row].emplace_back(t.col, t.value);
    if (t.row != t.col) rows[t.col].emplace_back(t.row, t.value);
  }
  SymmetricOperator op;
  op.n_ = n;
  op.sparse_ = true;
  op.row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    op.row_ptr_[i + 1] = op.row_ptr_[i] + rows[i].size();
    for (const auto& [c, v] : rows[i]) {
      op.col_.push_back(c);
      op.val_.push_back(v);
    }
  }
  op.lower_ = std::move(lower);
  return op;
}

SymmetricOperator SymmetricOperator::diagonal(const Vector& d) {
  SymmetricOperator out = dense(Matrix(d.asDiagonal()));
  out.exact_norm_ = d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
  return out;
}

SymmetricOperator SymmetricOperator::scaled_identity(std::size_t n, double scale) {
  return diagonal(Vector::Constant(static_cast<Eigen::Index>(n), scale));
}

void SymmetricOperator::apply_into(const Vector& v, Vector& out) const {
  if (static_cast<std::size_t>(v.size()) != n_)
    throw InputError("apply: vector length " + std::to_string(v.size()) + " != dimension " +
                     std::to_string(n_));
  out.resize(static_cast<Eigen::Index>(n_));
  std::span<const double> x(v.data(), n_);
  std::span<double> y(out.data(), n_);
  if (sparse_) {
    kernels::csr_matvec({n_, row_ptr_, col_, val_}, x, y);
  } else {
    kernels::dense_matvec({dense_.data(), n_ * n_}, n_, x, y);
  }
}

Vector SymmetricOperator::apply(const Vector& v) const {
  Vector out;
  apply_into(v, out);
  return out;
}

Vector SymmetricOperator::apply_serial(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != n_)
    throw InputError("apply: vector length " + std::to_string(v.size()) + " != dimension " +
                     std::to_string(n_));
  Vector out(static_cast<Eigen::Index>(n_));
  std::span<const double> x(v.data(), n_);
  std::span<double> y(out.data(), n_);
  if (sparse_) {
    kernels::csr_matvec_serial({n_, row_ptr_, col_, val_}, x, y);
  } else {
    kernels::dense_matvec_serial({dense_.data(), n_ * n_}, n_, x, y);
  }
  return out;
}

Matrix SymmetricOperator::to_dense() const {
  if (!sparse_) return dense_;
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_[p])) = val_[p];
  return m;
}

double SymmetricOperator::trace() const {
  if (!sparse_) return dense_.trace();
  double sum = 0.0;
  for (const auto& t : lower_)
    if (t.row == t.col) sum += t.value;
  return sum;
}

std::vector<Triplet> SymmetricOperator::lower_triplets() const {
  if (sparse_) return lower_;
  std::vector<Triplet> out;
  out.reserve(n_ * (n_ + 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      out.push_back({i, j, dense_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return out;
}

std::size_t SymmetricOperator::nonzeros() const {
  if (sparse_) return val_.size();
  return static_cast<std::size_t>((dense_.array() != 0.0).count());
}

SymmetricOperator SymmetricOperator::shifted(double shift) const {
  SymmetricOperator out;
  if (sparse_) {
    std::vector<Triplet> lower = lower_;
    std::vector<bool> has_diag(n_, false);
    for (auto& t : lower)
      if (t.row == t.col) {
        t.value += shift;
        has_diag[t.row] = true;
      }
    for (std::size_t i = 0; i < n_; ++i)
      if (!has_diag[i]) lower.push_back({i, i, shift});
    out = sparse(n_, std::move(lower));
  } else {
    Matrix m = dense_;
    m.diagonal().array() += shift;
    out = dense(m);
    if (exact_norm_ && n_ > 0) out.exact_norm_ = m.diagonal().cwiseAbs().maxCoeff();
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->spectrum) {
    auto s = std::make_shared<Spectrum>(*cache_->spectrum);
    s->eigenvalues.array() += shift;
    out.cache_->spectrum = std::move(s);
  }
  return out;
}

const Spectrum& SymmetricOperator::spectrum() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->spectrum) cache_->spectrum = std::make_shared<const Spectrum>(eigendecompose(*this));
  return *cache_->spectrum;
}

bool SymmetricOperator::has_spectrum() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->spectrum != nullptr;
}

double SymmetricOperator::norm_bound(double tol, std::uint64_t seed) const {
  if (has_spectrum()) return spectrum().norm();
  if (exact_norm_) return *exact_norm_;
  return estimate_spectral_norm(*this, tol, 10000, seed);
}

double estimate_spectral_norm(const SymmetricOperator& op, double tol, int max_iters,
                              std::uint64_t seed) {
  if (op.dim() == 0) throw InputError("estimate_spectral_norm: empty operator");
  if (!(tol > 0.0)) throw InputError("estimate_spectral_norm: tol must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(op.dim()));
  for (auto& e : v) e = normal(rng);
  v.normalize();

  // The increments shrink roughly geometrically; the remaining rise is
  // extrapolated from the last two so slow convergence is not mistaken for
  // a converged estimate.
  Vector w;
  double estimate = 0.0;
  double prev_rise = 0.0;
  double tail = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    op.apply_into(v, w);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    const double rise = it > 0 ? std::max(0.0, next - estimate) : next;
    estimate = std::max(estimate, next);
    if (it > 0) {
      const double ratio = prev_rise > 0.0 ? rise / prev_rise : 0.0;
      tail = ratio < 1.0 ? rise * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
      if (rise <= tol * next && tail <= tol * next) break;
    }
    prev_rise = rise;
    v = w / next;
  }
  if (!std::isfinite(tail)) tail = 0.0;
  return (estimate + tail) * (1.0 + 10.0 * tol);
}

Spectrum eigendecompose(const SymmetricOperator& op) {
  const std::size_t limit = dense_limit();
  if (op.dim() > limit)
    throw CapabilityError("dimension " + std::to_string(op.dim()) +
                          " exceeds the dense eigendecomposition limit " +
                          std::to_string(limit) +
                          "; use the iterative solvers or raise TRS_DENSE_LIMIT");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.to_dense());
  if (solver.info() != Eigen::Success) throw SolverAnomaly("eigendecomposition did not converge");
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

PinvResult pinv_apply(const Spectrum& spec, double shift, const Vector& v, double drop_tol) {
  if (static_cast<std::size_t>(v.size()) != spec.dim())
    throw InputError("pinv_apply: dimension mismatch");
  if (!(drop_tol > 0.0)) throw InputError("pinv_apply: drop_tol must be positive");
  const double cutoff = drop_tol * (1.0 + spec.norm());
  const Vector coeff = spec.eigenvectors.transpose() * v;
  Vector scaled = Vector::Zero(coeff.size());
  double dropped_sq = 0.0;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    const double shifted = spec.eigenvalues(i) + shift;
    if (std::abs(shifted) <= cutoff) {
      dropped_sq += coeff(i) * coeff(i);
    } else {
      scaled(i) = coeff(i) / shifted;
    }
  }
  PinvResult out;
  out.x = spec.eigenvectors * scaled;
  out.in_range = std::sqrt(dropped_sq) <= drop_tol * v.norm();
  return out;
}

}  // namespace trs
