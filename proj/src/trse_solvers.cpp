#include "trs/trse_solvers.hpp"

#include "trs/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace trs {

namespace {

// Below this the normalized step is treated as an exact stationary stop.
constexpr double kVanishing = 4.0 * std::numeric_limits<double>::epsilon();

void check_common(const TrseConfig& cfg) {
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (!(cfg.step_tol > 0.0) || !(cfg.y_zero_tol > 0.0))
    throw ConfigError("tolerances must be positive");
}

double sphere_multiplier(const QuadraticData& d, const Vector& x) {
  return -x.dot(d.op.apply(x) + d.c) / x.squaredNorm();
}

// Exact norm from the spectrum within the dense limit, else the power estimate.
double operator_norm(const SymmetricOperator& op) {
  if (op.dim() <= dense_limit()) return op.spectrum().norm();
  return op.norm_bound();
}

}  // namespace

double resolve_sphere_step(const TrseStepPolicy& policy, double lipschitz) {
  const double cap = lipschitz > 0.0 ? 1.0 / lipschitz : std::numeric_limits<double>::infinity();
  const double eta = policy.kind == TrseStepPolicy::Kind::Explicit ? policy.value
                     : lipschitz > 0.0                             ? cap
                                                                   : 1.0;
  if (!(eta > 0.0) || eta > cap)
    throw ConfigError("sphere step size " + std::to_string(eta) + " outside (0, 1/L] with L = " +
                      std::to_string(lipschitz));
  return eta;
}

std::optional<Vector> project_sphere(const Vector& y) {
  const double r = std::sqrt(y.squaredNorm());
  if (r <= kVanishing) return std::nullopt;
  return Vector(y / r);
}

Vector sample_unit_sphere(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InputError("sample_unit_sphere: dim must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(dim));
  double r2 = 0.0;
  while (r2 == 0.0) {
    for (auto& e : v) e = normal(rng);
    r2 = v.squaredNorm();
  }
  return v / std::sqrt(r2);
}

TrsSolution run_gpg(const TrseProblem& p, const Vector& x0, const TrseConfig& cfg) {
  check_common(cfg);
  if (static_cast<std::size_t>(x0.size()) != p.dim()) throw InputError("run_gpg: x0 has wrong length");
  if (std::abs(x0.norm() - 1.0) > 1e-12) throw InputError("run_gpg: x0 is not a unit vector");
  const double lipschitz = p.op.norm_bound();
  const double eta = resolve_sphere_step(cfg.eta_e, lipschitz);

  TrsSolution out;
  out.step_size = eta;
  if (cfg.record_trace) out.trace = SolveTrace{Constraint::Sphere, eta, lipschitz, {}, {}};

  Vector x = x0;
  Vector hx, s;
  p.op.apply_into(x, hx);
  ++out.matvecs;
  const bool keep_points = out.trace && cfg.record_points;
  if (out.trace) out.trace->records.push_back({0, 0.5 * x.dot(hx) + p.c.dot(x), 0.0, true, 0.0});
  if (keep_points) out.trace->points.push_back(x);

  long k = 0;
  while (k < cfg.max_iters) {
    s = x - eta * (hx + p.c);
    const double r = std::sqrt(s.squaredNorm());
    if (r <= kVanishing) {
      out.stationary_stop = true;
      out.converged = true;
      break;
    }
    const double before = (x - s).squaredNorm();
    Vector xn = s / r;
    const double after = (xn - s).squaredNorm();
    const double step = (xn - x).norm();
    x.swap(xn);
    ++k;
    p.op.apply_into(x, hx);
    ++out.matvecs;
    if (out.trace)
      out.trace->records.push_back(
          {k, 0.5 * x.dot(hx) + p.c.dot(x), step, true, (after - before) / (2.0 * eta)});
    if (keep_points) out.trace->points.push_back(x);
    if (step <= cfg.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.x_star = x;
  out.objective = 0.5 * x.dot(hx) + p.c.dot(x);
  out.lambda_hat = sphere_multiplier(p, x);
  return out;
}

TrsSolution run_pge2(const TrseProblem& p, const std::optional<Vector>& z0, const TrseConfig& cfg) {
  check_common(cfg);
  const auto n = static_cast<Eigen::Index>(p.dim());
  const Vector start = z0 ? *z0 : sample_unit_sphere(2 * p.dim(), cfg.seed);
  if (start.size() != 2 * n) throw InputError("run_pge2: z0 must have length 2n");
  if (std::abs(start.norm() - 1.0) > 1e-12) throw InputError("run_pge2: z0 is not a unit vector");
  const double lipschitz = p.op.norm_bound();
  const double eta = resolve_sphere_step(cfg.eta_e, lipschitz);

  TrsSolution out;
  out.step_size = eta;
  if (cfg.record_trace) out.trace = SolveTrace{Constraint::Sphere, eta, lipschitz, {}, {}};

  Vector x = start.head(n);
  Vector y = start.tail(n);
  Vector hx, hy, sx, sy;
  p.op.apply_into(x, hx);
  p.op.apply_into(y, hy);
  out.matvecs += 2;
  auto lifted = [&] { return 0.5 * x.dot(hx) + 0.5 * y.dot(hy) + p.c.dot(x); };
  if (out.trace) out.trace->records.push_back({0, lifted(), 0.0, true, 0.0});

  long k = 0;
  while (k < cfg.max_iters) {
    sx = x - eta * (hx + p.c);
    sy = y - eta * hy;
    const double r = std::sqrt(sx.squaredNorm() + sy.squaredNorm());
    if (r <= kVanishing) {
      out.stationary_stop = true;
      out.converged = true;
      break;
    }
    const double before = (x - sx).squaredNorm() + (y - sy).squaredNorm();
    Vector xn = sx / r;
    Vector yn = sy / r;
    const double after = (xn - sx).squaredNorm() + (yn - sy).squaredNorm();
    const double step = std::sqrt((xn - x).squaredNorm() + (yn - y).squaredNorm());
    x.swap(xn);
    y.swap(yn);
    ++k;
    p.op.apply_into(x, hx);
    p.op.apply_into(y, hy);
    out.matvecs += 2;
    if (out.trace)
      out.trace->records.push_back({k, lifted(), step, true, (after - before) / (2.0 * eta)});
    if (step <= cfg.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.z_tilde = LiftedProblem::join(x, y);
  if (y.norm() <= cfg.y_zero_tol) {
    out.x_star = x;
  } else {
    out.x_star = recover_boundary(x, y);
    out.recovered_via_theta = true;
  }
  out.objective = p.objective(out.x_star);
  out.lambda_hat = sphere_multiplier(p, out.x_star);
  return out;
}

PgConfig tau_shift_defaults() {
  PgConfig cfg;
  cfg.eta = StepPolicy::fraction_of_two_over_l(0.99);
  return cfg;
}

double trace_tr(const SymmetricOperator& op) {
  if (op.dim() == 0) return 0.0;
  return op.trace() / static_cast<double>(op.dim());
}

bool is_scalar_operator(const SymmetricOperator& op) {
  const double tau = trace_tr(op);
  return operator_norm(op.shifted(-tau)) <= 1e-12 * operator_norm(op);
}

TrsSolution run_tau_shift(const TrseProblem& p, const PgConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(p.dim());
  if (is_scalar_operator(p.op)) {
    TrsSolution out;
    const double cn = p.c.norm();
    if (cn > 0.0) {
      out.x_star = -p.c / cn;
    } else {
      out.x_star = Vector::Unit(n, 0);
    }
    out.converged = true;
    out.objective = p.objective(out.x_star);
    out.lambda_hat = sphere_multiplier(p, out.x_star);
    return out;
  }

  const double tau = trace_tr(p.op);
  const TrsProblem shifted(p.op.shifted(-tau), p.c);
  if (shifted.dim() <= dense_limit()) shifted.op.spectrum();
  TrsSolution out = run_algorithm1(shifted, std::nullopt, cfg);
  const double radius = out.x_star.norm();
  if (std::abs(radius - 1.0) > 1e-8)
    throw SolverAnomaly("tau-shift returned a point with norm " + std::to_string(radius) +
                        ", expected a point on the unit sphere");
  out.objective = p.objective(out.x_star);
  out.lambda_hat = sphere_multiplier(p, out.x_star);
  return out;
}

}  // namespace trs
