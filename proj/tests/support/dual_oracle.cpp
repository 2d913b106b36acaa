#include "dual_oracle.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace trs::independent {

double lambda_min_by_bisection(const Matrix& h) {
  const auto n = h.rows();
  const double bound = h.norm() + 1.0;
  double lo = -bound;  // H - lo I is positive definite
  double hi = bound;   // H - hi I is not
  for (int it = 0; it < 200 && hi - lo > 1e-15 * bound; ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::LLT<Matrix> llt(h - mid * Matrix::Identity(n, n));
    if (llt.info() == Eigen::Success) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct DualPoint {
  double value = 0.0;
  double norm2 = 0.0;  // ||x(lambda)||^2
};

DualPoint dual_at(const Matrix& h, const Vector& c, double lambda) {
  const auto n = h.rows();
  Eigen::LDLT<Matrix> ldlt(h + lambda * Matrix::Identity(n, n));
  const Vector x = -ldlt.solve(c);
  return {0.5 * c.dot(x) - 0.5 * lambda, x.squaredNorm()};
}

}  // namespace

double dual_optimal_value(const Matrix& h, const Vector& c, bool sphere) {
  const double l1 = lambda_min_by_bisection(h);
  const double scale = 1.0 + h.norm() + c.norm();
  const double lo = sphere ? -l1 : std::max(0.0, -l1);
  // Stay clear of a singular H + lo I; the offset is undone by a first-order
  // extrapolation below.
  const bool singular = sphere || l1 <= 0.0;
  const double start = singular ? lo + 1e-11 * scale : lo;
  const DualPoint left = dual_at(h, c, start);
  if (left.norm2 <= 1.0) return left.value + 0.5 * (start - lo) * (1.0 - left.norm2);
  // dual'(lambda) = (||x(lambda)||^2 - 1) / 2 decreases; find its zero.
  double a = start;
  double b = start + c.norm() + h.norm() + 1.0;
  for (int it = 0; it < 300 && b - a > 1e-16 * scale; ++it) {
    const double mid = 0.5 * (a + b);
    if (dual_at(h, c, mid).norm2 > 1.0) a = mid;
    else b = mid;
  }
  return dual_at(h, c, 0.5 * (a + b)).value;
}

double dual_optimal_value(const AnyProblem& p) {
  const QuadraticData& d = data_of(p);
  return dual_optimal_value(d.op.to_dense(), d.c, constraint_of(p) == Constraint::Sphere);
}

}  // namespace trs::independent
