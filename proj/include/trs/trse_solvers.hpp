// Sphere-constrained solvers: generalized projected gradient (normalized
// gradient step), its lifted 2n-dimensional form with recovery, and the
// tau-shift path that solves an equivalent ball problem.
#pragma once

#include "trs/pg_solvers.hpp"

#include <optional>

namespace trs {

struct TrseStepPolicy {
  enum class Kind { Explicit, OneOverL };
  Kind kind = Kind::OneOverL;
  double value = 0.0;

  static TrseStepPolicy explicit_step(double eta) { return {Kind::Explicit, eta}; }
  static TrseStepPolicy one_over_l() { return {Kind::OneOverL, 0.0}; }
};

struct TrseConfig {
  TrseStepPolicy eta_e;
  long max_iters = 500000;
  double step_tol = 1e-12;
  double y_zero_tol = 1e-7;
  std::uint64_t seed = 0;
  bool record_trace = false;
  /// Also keep every iterate in the trace (run_gpg only).
  bool record_points = false;
};

/// Throws ConfigError unless eta_e lies in (0, 1 / L].
double resolve_sphere_step(const TrseStepPolicy& policy, double lipschitz);

/// y / ||y||, or nullopt when y vanishes (the iteration has hit a
/// stationary point).
std::optional<Vector> project_sphere(const Vector& y);

/// Uniform sample from the unit sphere in `dim` dimensions.
Vector sample_unit_sphere(std::size_t dim, std::uint64_t seed);

TrsSolution run_gpg(const TrseProblem& p, const Vector& x0, const TrseConfig& cfg);

/// Without z0 the start is sample_unit_sphere(2n, cfg.seed).
TrsSolution run_pge2(const TrseProblem& p, const std::optional<Vector>& z0, const TrseConfig& cfg);

/// Step policy used by run_tau_shift when none is given: 0.99 * 2 / ||H - tau I||.
PgConfig tau_shift_defaults();

/// Solves the ball problem with Hessian H - tau I, tau = tr(H) / n, through
/// run_algorithm1; cfg's step policy is resolved against ||H - tau I||.
/// Scalar H takes the closed form -c / ||c||. Throws SolverAnomaly if the
/// returned point is off the sphere by more than 1e-8.
TrsSolution run_tau_shift(const TrseProblem& p, const PgConfig& cfg = tau_shift_defaults());

/// tr(H) / n.
double trace_tr(const SymmetricOperator& op);

/// Scalar test used by run_tau_shift: ||H - tau I|| <= 1e-12 ||H||.
bool is_scalar_operator(const SymmetricOperator& op);

}  // namespace trs
