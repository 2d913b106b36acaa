// Symmetric operators (the Hessian H), dense spectral data, power-iteration
// norm estimates and spectral pseudoinverse application.
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace trs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default cap on the dimension of dense eigendecompositions.
inline constexpr std::size_t kDefaultDenseLimit = 2000;

/// Dense eigendecomposition cap: `TRS_DENSE_LIMIT` from the environment when
/// set to a positive integer, otherwise kDefaultDenseLimit.
std::size_t dense_limit();

/// One stored entry of the lower triangle (row >= col).
struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors as
/// orthonormal columns.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
  /// Exact spectral norm max(|lambda_1|, |lambda_n|).
  double norm() const;
};

/// Immutable symmetric matrix, stored dense or as mirrored sparse rows.
///
/// Copies share a lazily computed spectrum cache, so an operator can be passed
/// by value to many concurrent solver runs and decomposed at most once.
class SymmetricOperator {
 public:
  /// Full square matrix; symmetry is checked to 1e-12 relative and the stored
  /// matrix is the exact average (M + M^T) / 2.
  static SymmetricOperator dense(const Matrix& m);
  /// Lower-triangle triplets with row >= col, no duplicates, indices < n.
  static SymmetricOperator sparse(std::size_t n, std::vector<Triplet> lower);
  static SymmetricOperator diagonal(const Vector& d);
  static SymmetricOperator scaled_identity(std::size_t n, double scale);

  std::size_t dim() const { return n_; }
  bool is_sparse() const { return sparse_; }

  /// H v using the OpenMP kernels.
  Vector apply(const Vector& v) const;
  /// H v into a preallocated output (no allocation on the hot path).
  void apply_into(const Vector& v, Vector& out) const;
  /// H v through the serial reference kernels.
  Vector apply_serial(const Vector& v) const;

  Matrix to_dense() const;
  /// Sum of the diagonal entries.
  double trace() const;
  /// Lower-triangle entries (row >= col), row-major order. For dense storage
  /// this lists every lower entry including zeros.
  std::vector<Triplet> lower_triplets() const;
  /// Number of stored nonzeros of the full (mirrored) matrix.
  std::size_t nonzeros() const;

  /// H + shift * I. A cached spectrum carries over with shifted eigenvalues.
  SymmetricOperator shifted(double shift) const;

  /// Dense eigendecomposition, computed on first use and cached.
  /// Throws CapabilityError above dense_limit().
  const Spectrum& spectrum() const;
  bool has_spectrum() const;

  /// Upper bound on ||H||_2 for step-size selection: exact when a spectrum is
  /// cached or the operator is diagonal, otherwise the inflated
  /// power-iteration estimate.
  double norm_bound(double tol = 1e-6, std::uint64_t seed = 0) const;

 private:
  struct SpectrumCache {
    std::mutex mutex;
    std::shared_ptr<const Spectrum> spectrum;
  };

  SymmetricOperator() : cache_(std::make_shared<SpectrumCache>()) {}

  std::size_t n_ = 0;
  bool sparse_ = false;
  Matrix dense_;
  // Set for diagonal operators, whose norm is max |d_i|.
  std::optional<double> exact_norm_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> val_;
  std::vector<Triplet> lower_;
  std::shared_ptr<SpectrumCache> cache_;
};

/// Power iteration on H^2: the estimate ||H v|| / ||v|| is nondecreasing and
/// stops when both its relative change and the geometric extrapolation of the
/// remaining rise drop below tol; the extrapolated value is then inflated by
/// (1 + 10 tol). Returns 0 for the zero operator.
double estimate_spectral_norm(const SymmetricOperator& op, double tol = 1e-6,
                              int max_iters = 10000, std::uint64_t seed = 0);

/// Uncached dense eigendecomposition. Throws CapabilityError above dense_limit().
Spectrum eigendecompose(const SymmetricOperator& op);

/// Default threshold for treating a shifted eigenvalue as a null mode.
inline constexpr double kDefaultDropTol = 1e-8;

struct PinvResult {
  Vector x;
  /// v lies numerically in Range(H + shift I).
  bool in_range = false;
};

/// (H + shift I)^+ v computed spectrally. Modes with
/// |lambda_i + shift| <= drop_tol (1 + ||H||_2) are treated as null modes.
PinvResult pinv_apply(const Spectrum& spec, double shift, const Vector& v,
                      double drop_tol = kDefaultDropTol);

}  // namespace trs
