// Experiment drivers behind the command-line tool: method dispatch, basin
// accounting over seeded trials, traces with rate verdicts, benchmarking and
// the near-tie gap demonstration.
#pragma once

#include "trs/oracle.hpp"
#include "trs/pg_solvers.hpp"
#include "trs/rate.hpp"
#include "trs/trse_solvers.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trs {

enum class Method { Pg, Alg1, DoubleStart, TwoStage, Gpg, Pge2, TauShift, Oracle };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);
/// Pg, Alg1, DoubleStart, TwoStage and Oracle accept ball problems; Gpg,
/// Pge2, TauShift and Oracle accept sphere problems.
bool supports(Method m, Constraint c);

enum class EtaPolicy { Default, Explicit, Fraction, OneOverL };

EtaPolicy parse_eta_policy(std::string_view name);

enum class InitKind { Zero, Seed, Explicit };

struct RunOptions {
  EtaPolicy eta_policy = EtaPolicy::Default;
  /// Explicit: the step itself. Fraction: multiple of 2 / L.
  std::optional<double> eta;
  std::uint64_t seed = 0;
  long max_iters = 500000;
  double step_tol = 1e-12;
  double y_zero_tol = 1e-7;
  bool record_trace = false;
  bool record_points = false;
  /// Starting point for pg and gpg (lifted methods always sample from seed
  /// unless Explicit, which then holds the 2n-vector).
  InitKind init = InitKind::Zero;
  Vector x0;
  double compare_tol = 0.0;
};

/// Combines eta_policy and eta into a ball step policy (and validates the
/// combination); `fallback` is used for Default.
StepPolicy ball_step_policy(const RunOptions& o, StepPolicy fallback = {});
TrseStepPolicy sphere_step_policy(const RunOptions& o);

struct MethodResult {
  Method method = Method::Oracle;
  TrsSolution solution;
  /// Filled for Method::Oracle only.
  std::optional<ReferenceSolution> reference;
  KktPoint kkt;
  double seconds = 0.0;
};

/// Throws ConfigError when the method does not support the problem's
/// constraint.
MethodResult run_method(const AnyProblem& p, Method m, const RunOptions& o);

/// Global reference value from the oracle.
double reference_objective(const AnyProblem& p);

struct KnownPoint {
  KktPoint point;
  double objective = 0.0;
  StationaryKind kind = StationaryKind::Saddle;
};

/// enumerate_kkt plus a stationary classification of each point, sorted by
/// objective.
std::vector<KnownPoint> known_points(const AnyProblem& p);

std::string limit_label(StationaryKind k);

/// Nearest known point within `radius`, or -1.
int assign_limit(const std::vector<KnownPoint>& known, const Vector& x, double radius = 1e-4);

struct BasinTrial {
  std::uint64_t seed = 0;
  Vector x0;
  int limit_index = -1;
  /// "global", "local-non-global", "saddle", "unassigned" or "error".
  std::string limit_label;
  long iterations = 0;
  double final_objective = 0.0;
  Vector x_star;
  std::string error;
};

struct BasinReport {
  std::vector<KnownPoint> known;
  /// Sorted by seed.
  std::vector<BasinTrial> trials;
  /// counts[i] for known point i; then unassigned and errors.
  std::vector<std::size_t> counts;
  std::size_t unassigned = 0;
  std::size_t errors = 0;
};

/// Trial i uses seed seed_base + i for its starting point. Trials run
/// concurrently; solver errors are recorded per trial.
BasinReport run_basin(const AnyProblem& p, Method m, const RunOptions& o, std::size_t trials,
                      std::uint64_t seed_base);

struct TraceRow {
  long iter = 0;
  double objective = 0.0;
  double gap = 0.0;
  double step_norm = 0.0;
  bool on_boundary = false;
};

struct TraceReport {
  MethodResult result;
  std::vector<TraceRow> rows;
  double reference = 0.0;
  /// "explicit", "kkt-limit", "oracle" or "final".
  std::string reference_source;
  RateVerdict verdict;
};

/// Runs an iterative method with tracing. Without an explicit reference the
/// gap is measured against the enumerated KKT value nearest the final
/// objective (when within 1e-3), else the oracle value, else the final value.
TraceReport run_trace(const AnyProblem& p, Method m, RunOptions o,
                      std::optional<double> reference = std::nullopt, double tail_fraction = 0.5);

struct BenchRow {
  Method method = Method::Oracle;
  std::size_t repetitions = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
  std::size_t matvecs = 0;
  /// matvecs / iterations (0 without iterations).
  double matvecs_per_iteration = 0.0;
  /// |objective - oracle objective|.
  double error = 0.0;
  /// Double start: iterations of the zero and random sub-runs.
  long zero_start_iterations = 0;
  long random_start_iterations = 0;
};

/// Mean wall time over repetitions; the other fields come from the last run.
std::vector<BenchRow> run_bench(const AnyProblem& p, const std::vector<Method>& methods,
                                const RunOptions& o, std::size_t repetitions);

struct GapRow {
  double tau = 0.0;
  double global_value = 0.0;
  std::optional<double> local_value;
  Vector global_x;
  std::optional<Vector> local_x;
  /// local_value - global_value when a local non-global minimizer exists.
  std::optional<double> gap;
};

struct WrongSelection {
  double tau = 0.0;
  std::uint64_t seed = 0;
  double compare_tol = 0.0;
  double picked_objective = 0.0;
  double global_objective = 0.0;
  Vector picked_x;
};

struct GapDemoReport {
  std::vector<GapRow> rows;
  /// Gaps exist for every tau and strictly decrease as tau decreases.
  bool decreasing = false;
  /// A double-start run at the smallest tau that returned the local
  /// non-global point, found by scanning seeds 0 .. max_seeds - 1.
  std::optional<WrongSelection> wrong_selection;
};

GapDemoReport run_gap_demo(const std::vector<double>& taus, double compare_tol = 1e-3,
                           std::uint64_t max_seeds = 1000);

}  // namespace trs
