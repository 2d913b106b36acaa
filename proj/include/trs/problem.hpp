// Quadratic problems over the unit ball / unit sphere, the 2n-dimensional
// lifting, and KKT residuals.
#pragma once

#include "trs/symmetric_operator.hpp"

#include <string_view>
#include <variant>

namespace trs {

enum class Constraint { Ball, Sphere };

std::string_view to_string(Constraint c);

/// Data shared by both problem kinds: q(x) = 1/2 x^T H x + c^T x.
struct QuadraticData {
  SymmetricOperator op;
  Vector c;

  std::size_t dim() const { return op.dim(); }
  double objective(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// min q(x) subject to ||x|| <= 1.
struct TrsProblem : QuadraticData {
  TrsProblem(SymmetricOperator h, Vector c);
  static constexpr Constraint constraint = Constraint::Ball;
};

/// min q(x) subject to ||x|| = 1.
struct TrseProblem : QuadraticData {
  TrseProblem(SymmetricOperator h, Vector c);
  static constexpr Constraint constraint = Constraint::Sphere;
};

using AnyProblem = std::variant<TrsProblem, TrseProblem>;

Constraint constraint_of(const AnyProblem& p);
const QuadraticData& data_of(const AnyProblem& p);

/// The 2n-dimensional problem with A = diag(H, H) and a = (c, 0). A is never
/// materialised: A z is two applications of H.
class LiftedProblem {
 public:
  explicit LiftedProblem(const TrsProblem& base);
  explicit LiftedProblem(const TrseProblem& base);

  const QuadraticData& base() const { return base_; }
  Constraint constraint() const { return constraint_; }
  std::size_t dim() const { return 2 * base_.dim(); }

  /// A z = (H x, H y).
  Vector apply(const Vector& z) const;
  /// a = (c, 0).
  Vector linear_term() const;
  /// f(z) = 1/2 z^T A z + a^T z.
  double objective(const Vector& z) const;
  /// ||A||_2 = ||H||_2.
  double norm_bound() const { return base_.op.norm_bound(); }

  static Vector join(const Vector& x, const Vector& y);

 private:
  QuadraticData base_;
  Constraint constraint_;
};

LiftedProblem lift(const TrsProblem& p);
LiftedProblem lift(const TrseProblem& p);

/// A candidate point with its multiplier, the lambda in (H + lambda I) x + c = 0,
/// and its residuals.
struct KktPoint {
  Vector x;
  double lambda = 0.0;
  double stationarity_residual = 0.0;
  double feasibility_residual = 0.0;
  double complementarity_residual = 0.0;

  double max_residual() const;
};

/// Ball: feasibility max(0, x^T x - 1), complementarity |lambda (x^T x - 1)|.
/// Sphere: feasibility |x^T x - 1|, complementarity 0.
KktPoint kkt_residuals(const QuadraticData& data, Constraint constraint, const Vector& x,
                       double lambda);
KktPoint kkt_residuals(const TrsProblem& p, const Vector& x, double lambda);
KktPoint kkt_residuals(const TrseProblem& p, const Vector& x, double lambda);
KktPoint kkt_residuals(const AnyProblem& p, const Vector& x, double lambda);

}  // namespace trs
