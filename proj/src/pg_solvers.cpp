#include "trs/pg_solvers.hpp"

#include "trs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace trs {

namespace {

constexpr double kBoundaryTol = 1e-12;

bool on_boundary(double norm) { return std::abs(norm - 1.0) <= kBoundaryTol; }

double boundary_multiplier(const QuadraticData& d, const Vector& x) {
  const double r2 = x.squaredNorm();
  if (std::abs(std::sqrt(r2) - 1.0) > 1e-10) return 0.0;
  return -x.dot(d.op.apply(x) + d.c) / r2;
}

void check_common(const PgConfig& cfg) {
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (!(cfg.step_tol > 0.0) || !(cfg.y_zero_tol > 0.0))
    throw ConfigError("tolerances must be positive");
}

}  // namespace

double resolve_step(const StepPolicy& policy, double lipschitz) {
  double eta = 0.0;
  if (policy.kind == StepPolicy::Kind::Explicit) {
    eta = policy.value;
  } else {
    if (!(policy.value > 0.0 && policy.value < 1.0))
      throw ConfigError("step fraction must lie in (0, 1)");
    eta = lipschitz > 0.0 ? policy.value * 2.0 / lipschitz : policy.value;
  }
  if (!(eta > 0.0) || (lipschitz > 0.0 && !(eta < 2.0 / lipschitz)))
    throw ConfigError("step size " + std::to_string(eta) + " outside (0, 2/L) with L = " +
                      std::to_string(lipschitz));
  return eta;
}

std::size_t descent_violations(const SolveTrace& trace) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const double prev = trace.records[i - 1].objective;
    const double increase = trace.records[i].objective - prev;
    if (increase > trace.records[i].descent_bound + 1e-12 * (1.0 + std::abs(prev))) ++bad;
  }
  return bad;
}

Vector project_ball(const Vector& y) {
  const double r = std::sqrt(y.squaredNorm());
  return r <= 1.0 ? y : Vector(y / r);
}

Vector sample_uniform_ball(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InputError("sample_uniform_ball: dim must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  double r2 = 0.0;
  while (r2 == 0.0) {
    for (auto& e : v) e = normal(rng);
    r2 = v.squaredNorm();
  }
  double u = 0.0;
  while (u == 0.0) u = uniform(rng);
  return v * (std::pow(u, 1.0 / static_cast<double>(dim)) / std::sqrt(r2));
}

TrsSolution run_pg(const TrsProblem& p, const Vector& x0, const PgConfig& cfg) {
  check_common(cfg);
  if (static_cast<std::size_t>(x0.size()) != p.dim()) throw InputError("run_pg: x0 has wrong length");
  if (x0.norm() > 1.0 + 1e-12) throw InputError("run_pg: x0 lies outside the unit ball");
  const double lipschitz = p.op.norm_bound();
  const double eta = resolve_step(cfg.eta, lipschitz);
  const double decrease = 1.0 / eta - 0.5 * lipschitz;

  TrsSolution out;
  out.step_size = eta;
  if (cfg.record_trace) out.trace = SolveTrace{Constraint::Ball, eta, lipschitz, {}, {}};

  Vector x = x0;
  Vector hx;
  Vector xbar;
  p.op.apply_into(x, hx);
  ++out.matvecs;
  const bool keep_points = out.trace && cfg.record_points;
  if (out.trace)
    out.trace->records.push_back({0, 0.5 * x.dot(hx) + p.c.dot(x), 0.0, on_boundary(x.norm()), 0.0});
  if (keep_points) out.trace->points.push_back(x);

  long k = 0;
  while (k < cfg.max_iters) {
    xbar = x - eta * (hx + p.c);
    const double d = std::sqrt(xbar.squaredNorm());
    if (d > 1.0) xbar /= d;
    const double step = (xbar - x).norm();
    x.swap(xbar);
    ++k;
    p.op.apply_into(x, hx);
    ++out.matvecs;
    if (out.trace)
      out.trace->records.push_back({k, 0.5 * x.dot(hx) + p.c.dot(x), step, on_boundary(x.norm()),
                                    -decrease * step * step});
    if (keep_points) out.trace->points.push_back(x);
    if (step <= cfg.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.x_star = x;
  out.objective = 0.5 * x.dot(hx) + p.c.dot(x);
  out.lambda_hat = boundary_multiplier(p, x);
  return out;
}

Vector recover_boundary(const Vector& x_t, const Vector& y_t) {
  const double yy = y_t.squaredNorm();
  if (yy == 0.0) throw InputError("recover_boundary: y must be nonzero");
  if (x_t.size() != y_t.size()) throw InputError("recover_boundary: length mismatch");
  const double s = x_t.dot(y_t);
  const double slack = 1.0 - x_t.squaredNorm();
  const double root = std::sqrt(std::max(0.0, s * s + yy * slack));
  // Both branches equal (sqrt(d) - s) / ||y||^2; each avoids cancellation.
  const double theta = s <= 0.0 ? (root - s) / yy : slack / (root + s);
  return x_t + theta * y_t;
}

TrsSolution run_algorithm1(const TrsProblem& p, const std::optional<Vector>& z0,
                           const PgConfig& cfg) {
  check_common(cfg);
  const auto n = static_cast<Eigen::Index>(p.dim());
  const Vector start = z0 ? *z0 : sample_uniform_ball(2 * p.dim(), cfg.seed);
  if (start.size() != 2 * n) throw InputError("run_algorithm1: z0 must have length 2n");
  if (start.norm() > 1.0 + 1e-12) throw InputError("run_algorithm1: z0 lies outside the unit ball");
  const double lipschitz = p.op.norm_bound();
  const double eta = resolve_step(cfg.eta, lipschitz);
  const double decrease = 1.0 / eta - 0.5 * lipschitz;

  TrsSolution out;
  out.step_size = eta;
  if (cfg.record_trace) out.trace = SolveTrace{Constraint::Ball, eta, lipschitz, {}, {}};

  Vector x = start.head(n);
  Vector y = start.tail(n);
  Vector hx, hy, xbar, ybar;
  p.op.apply_into(x, hx);
  p.op.apply_into(y, hy);
  out.matvecs += 2;
  auto lifted = [&] { return 0.5 * x.dot(hx) + 0.5 * y.dot(hy) + p.c.dot(x); };
  auto radius = [&] { return std::sqrt(x.squaredNorm() + y.squaredNorm()); };
  if (out.trace) out.trace->records.push_back({0, lifted(), 0.0, on_boundary(radius()), 0.0});

  long k = 0;
  while (k < cfg.max_iters) {
    xbar = x - eta * (hx + p.c);
    ybar = y - eta * hy;
    const double d = std::sqrt(xbar.squaredNorm() + ybar.squaredNorm());
    if (d > 1.0) {
      xbar /= d;
      ybar /= d;
    }
    const double step = std::sqrt((xbar - x).squaredNorm() + (ybar - y).squaredNorm());
    x.swap(xbar);
    y.swap(ybar);
    ++k;
    p.op.apply_into(x, hx);
    p.op.apply_into(y, hy);
    out.matvecs += 2;
    if (out.trace)
      out.trace->records.push_back({k, lifted(), step, on_boundary(radius()), -decrease * step * step});
    if (step <= cfg.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = k;
  out.z_tilde = LiftedProblem::join(x, y);

  const double y_norm = y.norm();
  if (y_norm > cfg.y_zero_tol && 1.0 - x.squaredNorm() > cfg.y_zero_tol) {
    out.x_star = recover_boundary(x, y);
    out.recovered_via_theta = true;
  } else {
    out.x_star = x;
  }
  out.objective = p.objective(out.x_star);
  out.lambda_hat = boundary_multiplier(p, out.x_star);
  return out;
}

TrsSolution run_double_start(const TrsProblem& p, const PgConfig& cfg, double compare_tol) {
  const Vector x0_random = sample_uniform_ball(p.dim(), cfg.seed);
  const TrsSolution zero = run_pg(p, Vector::Zero(static_cast<Eigen::Index>(p.dim())), cfg);
  const TrsSolution random = run_pg(p, x0_random, cfg);

  const double scale = std::max({1.0, std::abs(zero.objective), std::abs(random.objective)});
  const bool pick_zero = zero.objective < random.objective - compare_tol * scale;
  TrsSolution out = pick_zero ? zero : random;
  out.iterations = zero.iterations + random.iterations;
  out.matvecs = zero.matvecs + random.matvecs;
  out.converged = zero.converged && random.converged;
  DoubleStartDiagnostics diag;
  diag.zero_start_x = zero.x_star;
  diag.zero_start_objective = zero.objective;
  diag.zero_start_iterations = zero.iterations;
  diag.random_start_x = random.x_star;
  diag.random_start_objective = random.objective;
  diag.random_start_iterations = random.iterations;
  diag.random_start_x0 = x0_random;
  diag.picked_random = !pick_zero;
  out.double_start = std::move(diag);
  return out;
}

TrsSolution run_two_stage_convex(const TrsProblem& p, const PgConfig& cfg) {
  const Spectrum& spec = p.op.spectrum();
  const double lambda1 = spec.lambda_min();
  const double shift = std::min(lambda1, 0.0);
  const TrsProblem convex(p.op.shifted(-shift), p.c);
  TrsSolution out = run_pg(convex, Vector::Zero(static_cast<Eigen::Index>(p.dim())), cfg);
  if (lambda1 < 0.0 && 1.0 - out.x_star.squaredNorm() > 1e-12) {
    out.x_star = recover_boundary(out.x_star, spec.eigenvectors.col(0));
    out.recovered_via_theta = true;
  }
  out.objective = p.objective(out.x_star);
  out.lambda_hat = boundary_multiplier(p, out.x_star);
  return out;
}

}  // namespace trs
