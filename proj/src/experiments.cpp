#include "trs/experiments.hpp"

#include "trs/errors.hpp"
#include "trs/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trs {

Method parse_method(std::string_view name) {
  if (name == "pg") return Method::Pg;
  if (name == "alg1") return Method::Alg1;
  if (name == "double") return Method::DoubleStart;
  if (name == "two-stage") return Method::TwoStage;
  if (name == "gpg") return Method::Gpg;
  if (name == "pge2") return Method::Pge2;
  if (name == "tau-shift") return Method::TauShift;
  if (name == "oracle") return Method::Oracle;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Pg: return "pg";
    case Method::Alg1: return "alg1";
    case Method::DoubleStart: return "double";
    case Method::TwoStage: return "two-stage";
    case Method::Gpg: return "gpg";
    case Method::Pge2: return "pge2";
    case Method::TauShift: return "tau-shift";
    case Method::Oracle: break;
  }
  return "oracle";
}

bool supports(Method m, Constraint c) {
  switch (m) {
    case Method::Pg:
    case Method::Alg1:
    case Method::DoubleStart:
    case Method::TwoStage: return c == Constraint::Ball;
    case Method::Gpg:
    case Method::Pge2:
    case Method::TauShift: return c == Constraint::Sphere;
    case Method::Oracle: break;
  }
  return true;
}

EtaPolicy parse_eta_policy(std::string_view name) {
  if (name == "default") return EtaPolicy::Default;
  if (name == "explicit") return EtaPolicy::Explicit;
  if (name == "fraction") return EtaPolicy::Fraction;
  if (name == "one-over-l") return EtaPolicy::OneOverL;
  throw ConfigError("unknown eta policy '" + std::string(name) + "'");
}

namespace {

EtaPolicy effective_policy(const RunOptions& o) {
  if (o.eta_policy == EtaPolicy::Default && o.eta) return EtaPolicy::Explicit;
  if ((o.eta_policy == EtaPolicy::Explicit || o.eta_policy == EtaPolicy::Fraction) && !o.eta)
    throw ConfigError("eta policy needs a value for --eta");
  return o.eta_policy;
}

PgConfig make_pg(const RunOptions& o, StepPolicy fallback = {}) {
  PgConfig cfg;
  cfg.eta = ball_step_policy(o, fallback);
  cfg.max_iters = o.max_iters;
  cfg.step_tol = o.step_tol;
  cfg.y_zero_tol = o.y_zero_tol;
  cfg.seed = o.seed;
  cfg.record_trace = o.record_trace;
  cfg.record_points = o.record_points;
  return cfg;
}

TrseConfig make_trse(const RunOptions& o) {
  TrseConfig cfg;
  cfg.eta_e = sphere_step_policy(o);
  cfg.max_iters = o.max_iters;
  cfg.step_tol = o.step_tol;
  cfg.y_zero_tol = o.y_zero_tol;
  cfg.seed = o.seed;
  cfg.record_trace = o.record_trace;
  cfg.record_points = o.record_points;
  return cfg;
}

Vector start_point(const RunOptions& o, std::size_t n, bool sphere) {
  switch (o.init) {
    case InitKind::Zero:
      if (sphere) return Vector::Unit(static_cast<Eigen::Index>(n), 0);
      return Vector::Zero(static_cast<Eigen::Index>(n));
    case InitKind::Seed: return sphere ? sample_unit_sphere(n, o.seed) : sample_uniform_ball(n, o.seed);
    case InitKind::Explicit: break;
  }
  return o.x0;
}

std::optional<Vector> lifted_start(const RunOptions& o) {
  if (o.init == InitKind::Explicit) return o.x0;
  return std::nullopt;
}

}  // namespace

StepPolicy ball_step_policy(const RunOptions& o, StepPolicy fallback) {
  switch (effective_policy(o)) {
    case EtaPolicy::Default: return fallback;
    case EtaPolicy::Explicit: return StepPolicy::explicit_step(*o.eta);
    case EtaPolicy::Fraction: return StepPolicy::fraction_of_two_over_l(*o.eta);
    case EtaPolicy::OneOverL: break;
  }
  return StepPolicy::fraction_of_two_over_l(0.5);
}

TrseStepPolicy sphere_step_policy(const RunOptions& o) {
  switch (effective_policy(o)) {
    case EtaPolicy::Explicit: return TrseStepPolicy::explicit_step(*o.eta);
    case EtaPolicy::Fraction: throw ConfigError("sphere iterations take an explicit or 1/L step");
    case EtaPolicy::Default:
    case EtaPolicy::OneOverL: break;
  }
  return TrseStepPolicy::one_over_l();
}

MethodResult run_method(const AnyProblem& p, Method m, const RunOptions& o) {
  const Constraint constraint = constraint_of(p);
  if (!supports(m, constraint))
    throw ConfigError("method " + std::string(to_string(m)) + " does not solve " +
                      std::string(to_string(constraint)) + " problems");
  MethodResult r;
  r.method = m;
  const auto t0 = std::chrono::steady_clock::now();
  if (m == Method::Oracle) {
    ReferenceSolution ref = constraint == Constraint::Ball
                                ? solve_trs_reference(std::get<TrsProblem>(p))
                                : solve_trse_reference(std::get<TrseProblem>(p));
    r.solution.x_star = ref.x;
    r.solution.objective = ref.objective;
    r.solution.lambda_hat = ref.kkt.lambda;
    r.solution.converged = ref.certified;
    r.reference = std::move(ref);
  } else if (constraint == Constraint::Ball) {
    const auto& q = std::get<TrsProblem>(p);
    switch (m) {
      case Method::Pg: r.solution = run_pg(q, start_point(o, q.dim(), false), make_pg(o)); break;
      case Method::Alg1: r.solution = run_algorithm1(q, lifted_start(o), make_pg(o)); break;
      case Method::DoubleStart: r.solution = run_double_start(q, make_pg(o), o.compare_tol); break;
      default: r.solution = run_two_stage_convex(q, make_pg(o)); break;
    }
  } else {
    const auto& q = std::get<TrseProblem>(p);
    switch (m) {
      case Method::Gpg: r.solution = run_gpg(q, start_point(o, q.dim(), true), make_trse(o)); break;
      case Method::Pge2: r.solution = run_pge2(q, lifted_start(o), make_trse(o)); break;
      default: r.solution = run_tau_shift(q, make_pg(o, tau_shift_defaults().eta)); break;
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.kkt = r.reference ? r.reference->kkt : kkt_residuals(p, r.solution.x_star, r.solution.lambda_hat);
  return r;
}

double reference_objective(const AnyProblem& p) {
  if (constraint_of(p) == Constraint::Ball) return solve_trs_reference(std::get<TrsProblem>(p)).objective;
  return solve_trse_reference(std::get<TrseProblem>(p)).objective;
}

std::vector<KnownPoint> known_points(const AnyProblem& p) {
  std::vector<KnownPoint> out;
  const QuadraticData& d = data_of(p);
  for (KktPoint& k : enumerate_kkt(p)) {
    KnownPoint kp;
    kp.objective = d.objective(k.x);
    kp.kind = classify_stationary(p, k);
    kp.point = std::move(k);
    out.push_back(std::move(kp));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const KnownPoint& a, const KnownPoint& b) { return a.objective < b.objective; });
  return out;
}

std::string limit_label(StationaryKind k) {
  switch (k) {
    case StationaryKind::Global: return "global";
    case StationaryKind::LocalNonGlobal: return "local-non-global";
    case StationaryKind::Saddle: break;
  }
  return "saddle";
}

int assign_limit(const std::vector<KnownPoint>& known, const Vector& x, double radius) {
  int best = -1;
  double best_dist = radius;
  for (std::size_t i = 0; i < known.size(); ++i) {
    const double dist = (known[i].point.x - x).norm();
    if (dist <= best_dist) {
      best = static_cast<int>(i);
      best_dist = dist;
    }
  }
  return best;
}

BasinReport run_basin(const AnyProblem& p, Method m, const RunOptions& o, std::size_t trials,
                      std::uint64_t seed_base) {
  BasinReport report;
  if (data_of(p).dim() <= kEnumerationLimit) report.known = known_points(p);
  // Fill caches before the workers share the operator.
  data_of(p).op.norm_bound();
  report.trials.resize(trials);

  const auto count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    BasinTrial& t = report.trials[static_cast<std::size_t>(i)];
    t.seed = seed_base + static_cast<std::uint64_t>(i);
    RunOptions opt = o;
    opt.seed = t.seed;
    opt.init = InitKind::Seed;
    opt.record_trace = false;
    try {
      const std::size_t n = data_of(p).dim();
      const bool sphere = constraint_of(p) == Constraint::Sphere;
      const bool lifted = m == Method::Alg1 || m == Method::Pge2 || m == Method::TauShift;
      if (lifted) {
        t.x0 = sphere && m == Method::Pge2 ? sample_unit_sphere(2 * n, t.seed)
                                           : sample_uniform_ball(2 * n, t.seed);
      } else if (m == Method::DoubleStart) {
        t.x0 = sample_uniform_ball(n, t.seed);
      } else if (m != Method::Oracle && m != Method::TwoStage) {
        t.x0 = sphere ? sample_unit_sphere(n, t.seed) : sample_uniform_ball(n, t.seed);
      }
      const MethodResult r = run_method(p, m, opt);
      t.iterations = r.solution.iterations;
      t.final_objective = r.solution.objective;
      t.x_star = r.solution.x_star;
      t.limit_index = assign_limit(report.known, t.x_star);
      t.limit_label = t.limit_index >= 0
                          ? limit_label(report.known[static_cast<std::size_t>(t.limit_index)].kind)
                          : "unassigned";
    } catch (const std::exception& e) {
      t.limit_label = "error";
      t.error = e.what();
    }
  }

  report.counts.assign(report.known.size(), 0);
  for (const BasinTrial& t : report.trials) {
    if (t.limit_label == "error") ++report.errors;
    else if (t.limit_index < 0) ++report.unassigned;
    else ++report.counts[static_cast<std::size_t>(t.limit_index)];
  }
  return report;
}

namespace {

// q(x) - q(x_r) expanded around the reference point, which avoids the
// cancellation of subtracting two nearly equal objective values. With
// `lagrangian` the multiplier term lambda (||x||^2 - ||x_r||^2) / 2 is added;
// it vanishes when both points are on the sphere and removes the rounding
// noise of ||x|| from the gap.
double expanded_gap(const QuadraticData& d, const KktPoint& ref, const Vector& x, bool lagrangian) {
  const double mult = lagrangian ? ref.lambda : 0.0;
  const Vector dx = x - ref.x;
  const Vector g = d.op.apply(ref.x) + d.c + mult * ref.x;
  return 0.5 * (dx.dot(d.op.apply(dx)) + mult * dx.squaredNorm()) + g.dot(dx);
}

}  // namespace

TraceReport run_trace(const AnyProblem& p, Method m, RunOptions o, std::optional<double> reference,
                      double tail_fraction) {
  if (m == Method::Oracle || m == Method::DoubleStart)
    throw ConfigError("method " + std::string(to_string(m)) + " has no single trace");
  const QuadraticData& data = data_of(p);
  const bool plain = m == Method::Pg || m == Method::Gpg;
  const bool enumerable = data.dim() <= kEnumerationLimit;
  o.record_trace = true;
  o.record_points = plain && enumerable && !reference;
  TraceReport out;
  out.result = run_method(p, m, o);
  const SolveTrace& trace = *out.result.solution.trace;
  const double last = trace.records.empty() ? out.result.solution.objective
                                            : trace.records.back().objective;

  std::optional<KnownPoint> limit;
  if (reference) {
    out.reference = *reference;
    out.reference_source = "explicit";
  } else if (m == Method::TwoStage || m == Method::TauShift) {
    // These trace a transformed objective; its own limit is the baseline.
    out.reference = last;
    out.reference_source = "final";
  } else {
    if (enumerable) {
      const std::vector<KnownPoint> known = known_points(p);
      std::size_t best = known.size();
      for (std::size_t i = 0; i < known.size(); ++i)
        if (best == known.size() ||
            std::abs(known[i].objective - last) < std::abs(known[best].objective - last))
          best = i;
      if (best < known.size() && std::abs(known[best].objective - last) <= 1e-3) limit = known[best];
    }
    if (limit) {
      out.reference = limit->objective;
      out.reference_source = "kkt-limit";
    } else {
      try {
        out.reference = reference_objective(p);
        out.reference_source = "oracle";
      } catch (const CapabilityError&) {
        out.reference = last;
        out.reference_source = "final";
      }
    }
  }

  const bool expand = limit && trace.points.size() == trace.records.size();
  const bool ref_on_sphere = limit && std::abs(limit->point.x.norm() - 1.0) <= 1e-12;
  std::vector<double> iters, gaps;
  out.rows.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    const double gap = expand ? expanded_gap(data, limit->point, trace.points[i],
                                             ref_on_sphere && r.on_boundary)
                              : r.objective - out.reference;
    out.rows.push_back({r.k, r.objective, gap, r.step_norm, r.on_boundary});
    iters.push_back(static_cast<double>(r.k));
    gaps.push_back(gap);
  }
  out.verdict = classify_rate(iters, gaps, tail_fraction);
  return out;
}

std::vector<BenchRow> run_bench(const AnyProblem& p, const std::vector<Method>& methods,
                                const RunOptions& o, std::size_t repetitions) {
  if (repetitions == 0) throw ConfigError("bench needs at least one repetition");
  const double best = reference_objective(p);
  std::vector<BenchRow> rows;
  for (Method m : methods) {
    BenchRow row;
    row.method = m;
    row.repetitions = repetitions;
    double total = 0.0;
    MethodResult r;
    for (std::size_t i = 0; i < repetitions; ++i) {
      r = run_method(p, m, o);
      total += r.seconds;
    }
    const TrsSolution& s = r.solution;
    row.wall_seconds = total / static_cast<double>(repetitions);
    row.iterations = s.iterations;
    row.matvecs = s.matvecs;
    if (s.iterations > 0) {
      // Each solver spends one (lifted: two) extra product evaluating the start.
      const bool two = m == Method::DoubleStart || m == Method::Alg1 || m == Method::Pge2 ||
                       m == Method::TauShift;
      const std::size_t setup = two ? 2 : 1;
      row.matvecs_per_iteration =
          static_cast<double>(s.matvecs - setup) / static_cast<double>(s.iterations);
    }
    if (s.double_start) {
      row.zero_start_iterations = s.double_start->zero_start_iterations;
      row.random_start_iterations = s.double_start->random_start_iterations;
    }
    row.error = std::abs(s.objective - best);
    rows.push_back(row);
  }
  return rows;
}

GapDemoReport run_gap_demo(const std::vector<double>& taus, double compare_tol,
                           std::uint64_t max_seeds) {
  GapDemoReport report;
  for (double tau : taus) {
    const AnyProblem p = example2(tau);
    const std::vector<KnownPoint> known = known_points(p);
    GapRow row;
    row.tau = tau;
    row.global_value = known.front().objective;
    row.global_x = known.front().point.x;
    for (const KnownPoint& k : known) {
      if (k.kind != StationaryKind::LocalNonGlobal) continue;
      row.local_value = k.objective;
      row.local_x = k.point.x;
      row.gap = k.objective - row.global_value;
      break;
    }
    report.rows.push_back(std::move(row));
  }

  std::vector<const GapRow*> by_tau;
  for (const GapRow& r : report.rows) by_tau.push_back(&r);
  std::sort(by_tau.begin(), by_tau.end(), [](const GapRow* a, const GapRow* b) { return a->tau > b->tau; });
  report.decreasing = !by_tau.empty();
  for (std::size_t i = 0; i < by_tau.size(); ++i) {
    if (!by_tau[i]->gap) report.decreasing = false;
    else if (i > 0 && by_tau[i - 1]->gap && !(*by_tau[i]->gap < *by_tau[i - 1]->gap))
      report.decreasing = false;
  }

  if (by_tau.empty() || !by_tau.back()->local_x) return report;
  const GapRow& smallest = *by_tau.back();
  const TrsProblem p = example2(smallest.tau);
  for (std::uint64_t seed = 0; seed < max_seeds; ++seed) {
    PgConfig cfg;
    cfg.seed = seed;
    const TrsSolution s = run_double_start(p, cfg, compare_tol);
    if ((s.x_star - *smallest.local_x).norm() <= 1e-4) {
      report.wrong_selection = WrongSelection{smallest.tau, seed,       compare_tol,
                                              s.objective, smallest.global_value, s.x_star};
      break;
    }
  }
  return report;
}

}  // namespace trs
