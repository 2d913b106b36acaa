#include "trs/problem.hpp"

#include "trs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trs {

std::string_view to_string(Constraint c) { return c == Constraint::Ball ? "BALL" : "SPHERE"; }

double QuadraticData::objective(const Vector& x) const {
  return 0.5 * x.dot(op.apply(x)) + c.dot(x);
}

Vector QuadraticData::gradient(const Vector& x) const { return op.apply(x) + c; }

namespace {
void check_linear_term(const SymmetricOperator& h, const Vector& c) {
  if (static_cast<std::size_t>(c.size()) != h.dim())
    throw InputError("linear term has length " + std::to_string(c.size()) +
                     " but the operator has dimension " + std::to_string(h.dim()));
}
}  // namespace

TrsProblem::TrsProblem(SymmetricOperator h, Vector c_in)
    : QuadraticData{std::move(h), std::move(c_in)} {
  check_linear_term(op, c);
}

TrseProblem::TrseProblem(SymmetricOperator h, Vector c_in)
    : QuadraticData{std::move(h), std::move(c_in)} {
  check_linear_term(op, c);
}

Constraint constraint_of(const AnyProblem& p) {
  return std::holds_alternative<TrsProblem>(p) ? Constraint::Ball : Constraint::Sphere;
}

const QuadraticData& data_of(const AnyProblem& p) {
  return std::visit([](const auto& q) -> const QuadraticData& { return q; }, p);
}

LiftedProblem::LiftedProblem(const TrsProblem& base) : base_(base), constraint_(Constraint::Ball) {}

LiftedProblem::LiftedProblem(const TrseProblem& base)
    : base_(base), constraint_(Constraint::Sphere) {}

Vector LiftedProblem::join(const Vector& x, const Vector& y) {
  Vector z(x.size() + y.size());
  z << x, y;
  return z;
}

Vector LiftedProblem::apply(const Vector& z) const {
  const auto n = static_cast<Eigen::Index>(base_.dim());
  if (z.size() != 2 * n) throw InputError("lifted apply: dimension mismatch");
  return join(base_.op.apply(z.head(n)), base_.op.apply(z.tail(n)));
}

Vector LiftedProblem::linear_term() const {
  return join(base_.c, Vector::Zero(base_.c.size()));
}

double LiftedProblem::objective(const Vector& z) const {
  const auto n = static_cast<Eigen::Index>(base_.dim());
  if (z.size() != 2 * n) throw InputError("lifted objective: dimension mismatch");
  const Vector x = z.head(n);
  const Vector y = z.tail(n);
  return 0.5 * x.dot(base_.op.apply(x)) + 0.5 * y.dot(base_.op.apply(y)) + base_.c.dot(x);
}

LiftedProblem lift(const TrsProblem& p) { return LiftedProblem(p); }
LiftedProblem lift(const TrseProblem& p) { return LiftedProblem(p); }

double KktPoint::max_residual() const {
  return std::max({stationarity_residual, feasibility_residual, complementarity_residual});
}

KktPoint kkt_residuals(const QuadraticData& data, Constraint constraint, const Vector& x,
                       double lambda) {
  if (static_cast<std::size_t>(x.size()) != data.dim())
    throw InputError("kkt_residuals: dimension mismatch");
  KktPoint k;
  k.x = x;
  k.lambda = lambda;
  k.stationarity_residual = (data.op.apply(x) + lambda * x + data.c).norm();
  const double slack = x.squaredNorm() - 1.0;
  if (constraint == Constraint::Ball) {
    k.feasibility_residual = std::max(0.0, slack);
    k.complementarity_residual = std::abs(lambda * slack);
  } else {
    k.feasibility_residual = std::abs(slack);
    k.complementarity_residual = 0.0;
  }
  return k;
}

KktPoint kkt_residuals(const TrsProblem& p, const Vector& x, double lambda) {
  return kkt_residuals(p, Constraint::Ball, x, lambda);
}

KktPoint kkt_residuals(const TrseProblem& p, const Vector& x, double lambda) {
  return kkt_residuals(p, Constraint::Sphere, x, lambda);
}

KktPoint kkt_residuals(const AnyProblem& p, const Vector& x, double lambda) {
  return kkt_residuals(data_of(p), constraint_of(p), x, lambda);
}

}  // namespace trs
