// Projected gradient on the unit ball: plain PG, the lifted 2n-dimensional
// iteration with closed-form recovery, and the two baselines
// (double start, two-stage convex reformulation).
#pragma once

#include "trs/problem.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace trs {

/// Constant step size, either given outright or as a fraction of 2 / L.
struct StepPolicy {
  enum class Kind { Explicit, FractionOfTwoOverL };
  Kind kind = Kind::FractionOfTwoOverL;
  double value = 0.5;

  static StepPolicy explicit_step(double eta) { return {Kind::Explicit, eta}; }
  static StepPolicy fraction_of_two_over_l(double f) { return {Kind::FractionOfTwoOverL, f}; }
};

struct PgConfig {
  /// Default 1 / L.
  StepPolicy eta;
  long max_iters = 500000;
  double step_tol = 1e-12;
  double y_zero_tol = 1e-7;
  std::uint64_t seed = 0;
  bool record_trace = false;
  /// Also keep every iterate in the trace (plain PG only).
  bool record_points = false;
};

/// Resolve the step size against the Lipschitz bound; throws ConfigError
/// unless eta lies in (0, 2 / L).
double resolve_step(const StepPolicy& policy, double lipschitz);

struct TraceRecord {
  long k = 0;
  double objective = 0.0;
  /// ||z^k - z^(k-1)||, 0 for k = 0.
  double step_norm = 0.0;
  bool on_boundary = false;
  /// Upper bound on objective(k) - objective(k-1) guaranteed by the
  /// iteration's sufficient-decrease inequality (0 for k = 0).
  double descent_bound = 0.0;
};

/// Per-iteration history. Lifted solvers record the lifted objective f(z^k).
struct SolveTrace {
  Constraint constraint = Constraint::Ball;
  double step_size = 0.0;
  double lipschitz = 0.0;
  std::vector<TraceRecord> records;
  /// Iterates matching `records`, when requested.
  std::vector<Vector> points;
};

/// Number of records whose objective increase exceeds the descent bound by
/// more than 1e-12 (1 + |f|).
std::size_t descent_violations(const SolveTrace& trace);

/// The double-start baseline's two branches.
struct DoubleStartDiagnostics {
  Vector zero_start_x;
  double zero_start_objective = 0.0;
  long zero_start_iterations = 0;
  Vector random_start_x;
  double random_start_objective = 0.0;
  long random_start_iterations = 0;
  Vector random_start_x0;
  bool picked_random = false;
};

struct TrsSolution {
  Vector x_star;
  /// Final lifted iterate (lifted solvers only).
  Vector z_tilde;
  /// -x^T (H x + c) / ||x||^2 on the boundary, 0 inside.
  double lambda_hat = 0.0;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
  /// Sphere iterations only: x - eta grad q(x) vanished.
  bool stationary_stop = false;
  bool recovered_via_theta = false;
  std::size_t matvecs = 0;
  double step_size = 0.0;
  std::optional<SolveTrace> trace;
  std::optional<DoubleStartDiagnostics> double_start;
};

/// y if ||y|| <= 1, else y / ||y||.
Vector project_ball(const Vector& y);

/// Uniform sample from the unit ball in `dim` dimensions: Gaussian direction,
/// radius U^(1/dim). Deterministic per seed.
Vector sample_uniform_ball(std::size_t dim, std::uint64_t seed);

/// Plain projected gradient x <- P_B(x - eta (H x + c)).
TrsSolution run_pg(const TrsProblem& p, const Vector& x0, const PgConfig& cfg);

/// Projected gradient on the lifted problem followed by recovery. Without
/// z0 the start is sample_uniform_ball(2n, cfg.seed).
TrsSolution run_algorithm1(const TrsProblem& p, const std::optional<Vector>& z0,
                           const PgConfig& cfg);

/// x_t + theta y_t with theta >= 0 chosen so the result has unit norm.
/// Throws InputError for y_t = 0.
Vector recover_boundary(const Vector& x_t, const Vector& y_t);

/// Runs PG from 0 and from sample_uniform_ball(n, cfg.seed). The zero-start
/// endpoint is returned only when its objective is lower by more than
/// compare_tol * max(1, |q_0|, |q_B|); otherwise the random-start endpoint is.
TrsSolution run_double_start(const TrsProblem& p, const PgConfig& cfg, double compare_tol = 0.0);

/// PG from 0 on the convex reformulation with Hessian H - min(lambda_1, 0) I,
/// then completion along the bottom eigenvector onto the sphere when needed.
TrsSolution run_two_stage_convex(const TrsProblem& p, const PgConfig& cfg);

}  // namespace trs
