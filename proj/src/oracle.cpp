#include "trs/oracle.hpp"

#include "trs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace trs {

std::string_view to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Easy: return "Easy";
    case CaseKind::HardI: return "HardI";
    case CaseKind::HardII: return "HardII";
    case CaseKind::Ill: return "Ill";
  }
  return "?";
}

std::string_view to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::Global: return "global";
    case StationaryKind::LocalNonGlobal: return "local-nonglobal";
    case StationaryKind::Saddle: return "saddle";
  }
  return "?";
}

SecularFunction::SecularFunction(const Spectrum& spectrum, const Vector& c,
                                 OracleSettings settings)
    : spectrum_(&spectrum), c_(c), settings_(settings) {
  if (static_cast<std::size_t>(c.size()) != spectrum.dim())
    throw InputError("secular function: dimension mismatch");
  projections_ = spectrum.eigenvectors.transpose() * c;
  c_norm_ = c.norm();
  const double scale = 1.0 + spectrum.norm();
  const Eigen::Index n = projections_.size();
  for (Eigen::Index i = 0; i < n;) {
    Group g;
    g.eigenvalue = spectrum.eigenvalues(i);
    g.first = i;
    Eigen::Index j = i;
    while (j < n &&
           spectrum.eigenvalues(j) - spectrum.eigenvalues(i) <= settings.cluster_rel_tol * scale) {
      g.weight += projections_(j) * projections_(j);
      ++j;
    }
    g.size = j - i;
    g.active = std::sqrt(g.weight) > settings.hard_case_tol * c_norm_;
    groups_.push_back(g);
    i = j;
  }
}

double SecularFunction::operator()(double lambda) const {
  double sum = 0.0;
  for (const auto& g : groups_) {
    if (!g.active) continue;
    const double d = g.eigenvalue + lambda;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    sum += g.weight / (d * d);
  }
  return sum - 1.0;
}

double SecularFunction::derivative(double lambda) const {
  double sum = 0.0;
  for (const auto& g : groups_) {
    if (!g.active) continue;
    const double d = g.eigenvalue + lambda;
    sum += -2.0 * g.weight / (d * d * d);
  }
  return sum;
}

Vector SecularFunction::point(double lambda) const {
  return -pinv_apply(*spectrum_, lambda, c_, settings_.hard_case_tol).x;
}

namespace {

/// Bisection on (a, b) where the sign of f just right of a is `left_positive`
/// and opposite just left of b. f is never evaluated at the endpoints, so
/// they may be poles.
double bisect(const std::function<double(double)>& f, double a, double b, bool left_positive) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double v = f(mid);
    if (v == 0.0) return mid;
    if ((v > 0.0) == left_positive) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// Root of the convex, decreasing phi on (lo, hi) with phi > 0 near lo and
/// phi(hi) < 0. Safeguarded Newton: a Newton step is taken only when it stays
/// inside the current bracket, otherwise the bracket is bisected. Runs to
/// working precision and returns the iterate with the smallest |phi|.
double newton_bisection(const SecularFunction& phi, double lo, double hi) {
  double a = lo;
  double fa = phi(a);
  if (!(std::isfinite(fa) && fa > 0.0)) {
    // lo is a pole (or phi is already non-positive there): step off it.
    double delta = 1e-12 * (1.0 + std::abs(lo));
    a = lo + delta;
    fa = phi(a);
    while (!(fa > 0.0) && delta > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lo))) {
      delta *= 0.1;
      a = lo + delta;
      fa = phi(a);
    }
    if (!(fa > 0.0)) return lo;
    if (!std::isfinite(fa)) {
      delta = 1e-12 * (1.0 + std::abs(lo));
      while (!std::isfinite(fa)) {
        delta *= 2.0;
        a = lo + delta;
        fa = phi(a);
      }
    }
  }
  double b = hi;
  double x = a;
  double fx = fa;
  double best = x;
  double best_f = std::abs(fx);
  for (int it = 0; it < 500; ++it) {
    if (std::abs(fx) < best_f) {
      best = x;
      best_f = std::abs(fx);
    }
    if (fx == 0.0) return x;
    if (fx > 0.0) {
      a = x;
    } else {
      b = x;
    }
    if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    const double dfx = phi.derivative(x);
    double next = dfx != 0.0 ? x - fx / dfx : a;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    x = next;
    fx = phi(x);
  }
  return std::abs(fx) < best_f ? x : best;
}

/// First eigenvector spanning the lambda_1 eigenspace and the drop threshold
/// deciding what belongs to it.
struct BottomMode {
  double lambda1 = 0.0;
  Vector u1;
  double component = 0.0;  // ||P_1 c||
};

BottomMode bottom_mode(const Spectrum& spec, const Vector& c, double drop_tol) {
  BottomMode m;
  m.lambda1 = spec.lambda_min();
  m.u1 = spec.eigenvectors.col(0);
  const double cutoff = drop_tol * (1.0 + spec.norm());
  double sq = 0.0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    if (spec.eigenvalues(i) - m.lambda1 > cutoff) break;
    const double proj = spec.eigenvectors.col(i).dot(c);
    sq += proj * proj;
  }
  m.component = std::sqrt(sq);
  return m;
}

void finish(ReferenceSolution& out, const QuadraticData& d, Constraint constraint, double lambda,
            double lambda1, double tol) {
  out.kkt = kkt_residuals(d, constraint, out.x, lambda);
  out.objective = d.objective(out.x);
  out.certified = lambda >= -lambda1 - tol &&
                  out.kkt.stationarity_residual <= std::max(tol, 1e-10) * (1.0 + d.c.norm());
}

/// Shared by ball and sphere: the boundary solution with multiplier at least
/// lo >= -lambda_1. Sets x and the label; returns the multiplier.
double solve_boundary(ReferenceSolution& out, const QuadraticData& d, const Spectrum& spec,
                    const SecularFunction& phi, double lo, double tol, OracleSettings settings) {
  const BottomMode bottom = bottom_mode(spec, d.c, settings.hard_case_tol);
  const double c_norm = d.c.norm();
  const bool hard = bottom.component <= settings.hard_case_tol * c_norm;
  double lambda = 0.0;
  if (hard) {
    const Vector xp = -pinv_apply(spec, -bottom.lambda1, d.c, settings.hard_case_tol).x;
    const double r = xp.norm();
    if (lo <= -bottom.lambda1 && r <= 1.0 + tol) {
      const double alpha = std::sqrt(std::max(0.0, 1.0 - r * r));
      out.x = xp + alpha * bottom.u1;
      lambda = -bottom.lambda1;
      out.label.kind = std::abs(r - 1.0) <= std::max(tol, 1e-12) ? CaseKind::Ill : CaseKind::HardII;
      return lambda;
    }
    out.label.kind = CaseKind::HardI;
  } else {
    out.label.kind = CaseKind::Easy;
  }
  const double hi = lo + c_norm + spec.norm() + 1.0;
  lambda = newton_bisection(phi, lo, hi);
  out.root_branch = true;
  out.secular_value = phi(lambda);
  out.x = phi.point(lambda);
  return lambda;
}

}  // namespace

ReferenceSolution solve_trs_reference(const TrsProblem& p, double tol, OracleSettings settings) {
  const Spectrum& spec = p.op.spectrum();
  const SecularFunction phi(spec, p.c, settings);
  const double lambda1 = spec.lambda_min();
  const double cutoff = settings.hard_case_tol * (1.0 + spec.norm());
  ReferenceSolution out;

  if (lambda1 >= -cutoff) {
    const PinvResult inner = pinv_apply(spec, 0.0, p.c, settings.hard_case_tol);
    if (inner.in_range && inner.x.norm() <= 1.0) {
      out.x = -inner.x;
      out.label.interior = out.x.norm() < 1.0;
      // Classification follows the multiplier rules with lambda* = 0.
      const BottomMode bottom = bottom_mode(spec, p.c, settings.hard_case_tol);
      if (bottom.component > settings.hard_case_tol * p.c.norm()) {
        out.label.kind = CaseKind::Easy;
      } else if (0.0 > -lambda1 + tol) {
        out.label.kind = CaseKind::HardI;
      } else {
        const double r = pinv_apply(spec, -lambda1, p.c, settings.hard_case_tol).x.norm();
        out.label.kind = std::abs(r - 1.0) <= std::max(tol, 1e-12) ? CaseKind::Ill : CaseKind::HardII;
      }
      finish(out, p, Constraint::Ball, 0.0, lambda1, tol);
      return out;
    }
  }

  const double lo = std::max(0.0, -lambda1);
  const double lambda = solve_boundary(out, p, spec, phi, lo, tol, settings);
  finish(out, p, Constraint::Ball, lambda, lambda1, tol);
  return out;
}

ReferenceSolution solve_trse_reference(const TrseProblem& p, double tol, OracleSettings settings) {
  const Spectrum& spec = p.op.spectrum();
  const SecularFunction phi(spec, p.c, settings);
  const double lambda1 = spec.lambda_min();
  ReferenceSolution out;
  const double lambda = solve_boundary(out, p, spec, phi, -lambda1, tol, settings);
  finish(out, p, Constraint::Sphere, lambda, lambda1, tol);
  return out;
}

std::vector<KktPoint> enumerate_kkt(const AnyProblem& p, double tol, OracleSettings settings) {
  const QuadraticData& d = data_of(p);
  const Constraint constraint = constraint_of(p);
  if (d.dim() > kEnumerationLimit)
    throw CapabilityError("KKT enumeration supports n <= " + std::to_string(kEnumerationLimit) +
                          ", got n = " + std::to_string(d.dim()));
  const Spectrum& spec = d.op.spectrum();
  const SecularFunction phi(spec, d.c, settings);
  const double scale = 1.0 + spec.norm() + d.c.norm();
  const bool ball = constraint == Constraint::Ball;

  std::vector<KktPoint> points;
  auto add = [&](const Vector& x, double lambda) {
    if (ball && lambda < -tol) return;
    for (const auto& q : points)
      if ((q.x - x).norm() <= 1e-9 && std::abs(q.lambda - lambda) <= 1e-9 * (1.0 + std::abs(lambda)))
        return;
    KktPoint k = kkt_residuals(d, constraint, x, lambda);
    if (k.stationarity_residual > tol * scale || k.feasibility_residual > tol ||
        k.complementarity_residual > tol * (1.0 + std::abs(lambda)))
      throw SolverAnomaly("KKT enumeration produced a point with residual " +
                          std::to_string(k.max_residual()));
    points.push_back(std::move(k));
  };

  // Interior stationary point (lambda = 0).
  if (ball) {
    const PinvResult inner = pinv_apply(spec, 0.0, d.c, settings.hard_case_tol);
    if (inner.in_range && inner.x.norm() <= 1.0) add(-inner.x, 0.0);
  }

  // Roots of phi: active poles in ascending order of -d_j.
  std::vector<double> poles;
  for (const auto& g : phi.groups())
    if (g.active) poles.push_back(-g.eigenvalue);
  std::sort(poles.begin(), poles.end());
  const auto f = [&](double l) { return phi(l); };
  const auto df = [&](double l) { return phi.derivative(l); };
  const auto add_root = [&](double lambda) {
    const Vector x = phi.point(lambda);
    add(x / x.norm(), lambda);
  };
  if (!poles.empty()) {
    const double reach = d.c.norm() + 1.0;
    // (-inf, first pole): phi increases from -1 to +inf.
    add_root(bisect(f, poles.front() - reach, poles.front(), false));
    // (last pole, +inf): phi decreases from +inf to -1.
    add_root(bisect(f, poles.back(), poles.back() + reach, true));
    for (std::size_t j = 0; j + 1 < poles.size(); ++j) {
      const double a = poles[j];
      const double b = poles[j + 1];
      const double m = bisect(df, a, b, false);  // phi' runs from -inf to +inf
      const double fm = phi(m);
      if (fm < -1e-15) {
        add_root(bisect(f, a, m, true));
        add_root(bisect(f, m, b, false));
      } else if (fm <= 1e-15) {
        add_root(m);
      }
    }
  }

  // Hard-case families at every eigenvalue c does not see.
  for (const auto& g : phi.groups()) {
    if (g.active) continue;
    const double lambda = -g.eigenvalue;
    if (ball && lambda < -tol) continue;
    const Vector xp = -pinv_apply(spec, lambda, d.c, settings.hard_case_tol).x;
    const double r = xp.norm();
    if (r > 1.0 + tol) continue;
    const double alpha = std::sqrt(std::max(0.0, 1.0 - r * r));
    const Vector u = spec.eigenvectors.col(g.first);
    add(xp + alpha * u, lambda);
    if (alpha > tol) add(xp - alpha * u, lambda);
  }
  return points;
}

CaseLabel classify_case(const TrsProblem& p, double tol, OracleSettings settings) {
  const Spectrum& spec = p.op.spectrum();
  const double lambda1 = spec.lambda_min();
  const ReferenceSolution ref = solve_trs_reference(p, 1e-12, settings);
  CaseLabel label;
  label.interior = ref.label.interior;
  const PinvResult range = pinv_apply(spec, -lambda1, p.c, settings.hard_case_tol);
  if (!range.in_range) {
    label.kind = CaseKind::Easy;
    return label;
  }
  if (ref.kkt.lambda > -lambda1 + tol) {
    label.kind = CaseKind::HardI;
    return label;
  }
  const double r = range.x.norm();
  label.kind = std::abs(r - 1.0) <= tol ? CaseKind::Ill : CaseKind::HardII;
  if (label.kind == CaseKind::Ill) label.interior = false;
  return label;
}

bool check_global(const AnyProblem& p, const Vector& x, double lambda, double tol) {
  const QuadraticData& d = data_of(p);
  const KktPoint k = kkt_residuals(p, x, lambda);
  const double lambda1 = d.op.spectrum().lambda_min();
  const double h_norm = d.op.spectrum().norm();
  if (k.stationarity_residual > tol * (1.0 + h_norm + d.c.norm())) return false;
  if (k.feasibility_residual > tol) return false;
  if (k.complementarity_residual > tol * (1.0 + std::abs(lambda))) return false;
  if (lambda < -lambda1 - tol) return false;
  if (constraint_of(p) == Constraint::Ball && lambda < -tol) return false;
  return true;
}

StationaryKind classify_stationary(const AnyProblem& p, const KktPoint& point, double tol) {
  const QuadraticData& d = data_of(p);
  const Spectrum& spec = d.op.spectrum();
  const double lambda1 = spec.lambda_min();
  const bool ball = constraint_of(p) == Constraint::Ball;
  if (point.lambda >= -lambda1 - tol && (!ball || point.lambda >= -tol)) return StationaryKind::Global;

  const double margin = tol * (1.0 + spec.norm());
  const Matrix hessian = d.op.to_dense() + point.lambda * Matrix::Identity(d.dim(), d.dim());
  const double r = point.x.norm();
  const bool interior = ball && r < 1.0 - 1e-9;
  if (interior) {
    // Lambda = 0 here; the Hessian itself must be positive definite.
    Eigen::SelfAdjointEigenSolver<Matrix> es(hessian, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > margin ? StationaryKind::LocalNonGlobal : StationaryKind::Saddle;
  }
  if (ball && point.lambda <= margin) return StationaryKind::Saddle;  // no strict complementarity
  // Orthonormal basis of the tangent space x^perp from a full QR of x.
  const Vector xn = point.x / r;
  const Matrix column = xn;
  Eigen::HouseholderQR<Matrix> qr(column);
  const Matrix q = qr.householderQ();
  const Matrix z = q.rightCols(static_cast<Eigen::Index>(d.dim()) - 1);
  if (z.cols() == 0) return StationaryKind::LocalNonGlobal;
  Eigen::SelfAdjointEigenSolver<Matrix> es(z.transpose() * hessian * z, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) > margin ? StationaryKind::LocalNonGlobal : StationaryKind::Saddle;
}

}  // namespace trs
