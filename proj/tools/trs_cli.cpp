// trs: command-line front end for the trust-region toolkit.
//
//   trs solve    <file> --method alg1 --seed 7
//   trs classify <file>
//   trs generate --kind easy --n 8 --seed 3 --out easy.trs
//   trs trace    <file> --method pg --init seed --seed 11 --out trace.csv
//   trs basin    <file> --method pg --trials 200
//   trs bench    <file> --methods pg,alg1,double,oracle
//   trs gap-demo
//
// Exit codes: 0 ok, 2 usage, 3 parse / file, 4 input / config,
// 5 capability, 6 solver anomaly.

#include "trs/errors.hpp"
#include "trs/experiments.hpp"
#include "trs/generators.hpp"
#include "trs/problem_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kParse = 3, kInput = 4, kCapability = 5, kAnomaly = 6 };

struct Common {
  std::string method = "alg1";
  std::optional<double> eta;
  std::string eta_policy = "default";
  std::uint64_t seed = 0;
  long max_iters = 500000;
  double step_tol = 1e-12;
  std::string out;
  std::string format = "csv";
  std::string init = "zero";
  std::string x0;
};

void add_common(CLI::App* cmd, Common& c, bool with_method = true) {
  if (with_method)
    cmd->add_option("--method", c.method, "pg|alg1|double|two-stage|gpg|pge2|tau-shift|oracle");
  cmd->add_option("--eta", c.eta, "step size (explicit) or fraction of 2/L (fraction policy)");
  cmd->add_option("--eta-policy", c.eta_policy, "default|explicit|fraction|one-over-l");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--max-iters", c.max_iters, "iteration cap");
  cmd->add_option("--step-tol", c.step_tol, "stop when the step norm falls below this");
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

trs::Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw trs::InputError("bad number '" + item + "' in vector");
    }
  }
  return Eigen::Map<trs::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

trs::RunOptions run_options(const Common& c) {
  trs::RunOptions o;
  o.eta_policy = trs::parse_eta_policy(c.eta_policy);
  o.eta = c.eta;
  o.seed = c.seed;
  o.max_iters = c.max_iters;
  o.step_tol = c.step_tol;
  if (c.init == "zero") o.init = trs::InitKind::Zero;
  else if (c.init == "seed") o.init = trs::InitKind::Seed;
  else if (c.init == "explicit") {
    o.init = trs::InitKind::Explicit;
    o.x0 = parse_vector(c.x0);
  } else {
    throw trs::ConfigError("--init must be zero, seed or explicit");
  }
  return o;
}

std::string real(double v) { return trs::format_real(v); }

std::string joined(const trs::Vector& v, char sep) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += real(v(i));
  }
  return s;
}

std::vector<double> as_list(const trs::Vector& v) { return {v.data(), v.data() + v.size()}; }

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw trs::InputError("cannot write '" + c.out + "'");
  f << text;
}

std::string case_name(const trs::CaseLabel& l) {
  std::string s(trs::to_string(l.kind));
  if (l.interior) s += " (interior)";
  return s;
}

int cmd_solve(const std::string& file, const Common& c) {
  const trs::AnyProblem p = trs::read_problem_file(file);
  const trs::Method m = trs::parse_method(c.method);
  const trs::MethodResult r = trs::run_method(p, m, run_options(c));
  const trs::TrsSolution& s = r.solution;
  std::string label;
  if (r.reference) label = case_name(r.reference->label);

  if (c.format == "json") {
    json j;
    j["method"] = trs::to_string(m);
    j["constraint"] = trs::to_string(trs::constraint_of(p));
    j["x"] = as_list(s.x_star);
    j["objective"] = s.objective;
    j["lambda_hat"] = s.lambda_hat;
    j["iterations"] = s.iterations;
    j["matvecs"] = s.matvecs;
    j["converged"] = s.converged;
    j["stationary_stop"] = s.stationary_stop;
    j["recovered_via_theta"] = s.recovered_via_theta;
    j["residuals"] = {{"stationarity", r.kkt.stationarity_residual},
                      {"feasibility", r.kkt.feasibility_residual},
                      {"complementarity", r.kkt.complementarity_residual}};
    if (r.reference) j["label"] = label;
    if (s.double_start) {
      j["double_start"] = {{"zero_start_objective", s.double_start->zero_start_objective},
                           {"random_start_objective", s.double_start->random_start_objective},
                           {"picked_random", s.double_start->picked_random}};
    }
    emit(c, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << "method,objective,lambda_hat,iterations,matvecs,converged,recovered_via_theta,label,"
        "stationarity,feasibility,complementarity,x\n";
  os << trs::to_string(m) << ',' << real(s.objective) << ',' << real(s.lambda_hat) << ','
     << s.iterations << ',' << s.matvecs << ',' << s.converged << ',' << s.recovered_via_theta << ','
     << label << ',' << real(r.kkt.stationarity_residual) << ',' << real(r.kkt.feasibility_residual)
     << ',' << real(r.kkt.complementarity_residual) << ',' << joined(s.x_star, ' ') << '\n';
  emit(c, os.str());
  return kOk;
}

int cmd_classify(const std::string& file, const Common& c) {
  const trs::AnyProblem p = trs::read_problem_file(file);
  std::string label;
  double lambda = 0.0;
  if (trs::constraint_of(p) == trs::Constraint::Ball) {
    const auto& q = std::get<trs::TrsProblem>(p);
    label = case_name(trs::classify_case(q));
    lambda = trs::solve_trs_reference(q).kkt.lambda;
  } else {
    const auto ref = trs::solve_trse_reference(std::get<trs::TrseProblem>(p));
    label = case_name(ref.label);
    lambda = ref.kkt.lambda;
  }
  const trs::Spectrum& spec = trs::data_of(p).op.spectrum();
  if (c.format == "json") {
    json j = {{"constraint", trs::to_string(trs::constraint_of(p))},
              {"label", label},
              {"lambda", lambda},
              {"lambda_min", spec.lambda_min()}};
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, "constraint,label,lambda,lambda_min\n" + std::string(trs::to_string(trs::constraint_of(p))) +
                "," + label + "," + real(lambda) + "," + real(spec.lambda_min()) + "\n");
  }
  return kOk;
}

int cmd_generate(const std::string& kind, std::size_t n, double tau, const Common& c) {
  const trs::AnyProblem p = trs::generate(trs::parse_instance_kind(kind), n, c.seed, tau);
  emit(c, trs::serialize_problem(p));
  return kOk;
}

int cmd_trace(const std::string& file, const Common& c, std::optional<double> reference,
              double tail) {
  const trs::AnyProblem p = trs::read_problem_file(file);
  const trs::TraceReport t =
      trs::run_trace(p, trs::parse_method(c.method), run_options(c), reference, tail);
  const trs::RateVerdict& v = t.verdict;
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"iter", r.iter},
                      {"objective", r.objective},
                      {"gap", r.gap},
                      {"step_norm", r.step_norm},
                      {"on_boundary", r.on_boundary}});
    json j = {{"rows", rows},
              {"reference", t.reference},
              {"reference_source", t.reference_source},
              {"verdict",
               {{"label", trs::to_string(v.label)},
                {"linear_slope", v.linear_fit.slope},
                {"linear_r2", v.linear_fit.r2},
                {"power_exponent", v.power_fit.slope},
                {"power_r2", v.power_fit.r2},
                {"tail_fraction", v.tail_fraction},
                {"samples", v.samples}}}};
    emit(c, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << "iter,objective,gap,step_norm,on_boundary\n";
  for (const auto& r : t.rows)
    os << r.iter << ',' << real(r.objective) << ',' << real(r.gap) << ',' << real(r.step_norm) << ','
       << (r.on_boundary ? 1 : 0) << '\n';
  os << "# reference=" << real(t.reference) << " source=" << t.reference_source << '\n';
  os << "# verdict=" << trs::to_string(v.label) << " linear_slope=" << real(v.linear_fit.slope)
     << " linear_r2=" << real(v.linear_fit.r2) << " power_exponent=" << real(v.power_fit.slope)
     << " power_r2=" << real(v.power_fit.r2) << " tail_fraction=" << real(v.tail_fraction)
     << " samples=" << v.samples << '\n';
  emit(c, os.str());
  return kOk;
}

int cmd_basin(const std::string& file, const Common& c, std::size_t trials) {
  const trs::AnyProblem p = trs::read_problem_file(file);
  const trs::BasinReport b = trs::run_basin(p, trs::parse_method(c.method), run_options(c), trials, c.seed);
  if (c.format == "json") {
    json known = json::array();
    for (std::size_t i = 0; i < b.known.size(); ++i)
      known.push_back({{"index", i},
                       {"label", trs::limit_label(b.known[i].kind)},
                       {"objective", b.known[i].objective},
                       {"lambda", b.known[i].point.lambda},
                       {"x", as_list(b.known[i].point.x)},
                       {"count", b.counts[i]}});
    json trials_json = json::array();
    for (const auto& t : b.trials) {
      json row = {{"seed", t.seed},
                  {"limit_index", t.limit_index},
                  {"limit_label", t.limit_label},
                  {"iterations", t.iterations},
                  {"final_objective", t.final_objective},
                  {"x0", as_list(t.x0)}};
      if (!t.error.empty()) row["error"] = t.error;
      trials_json.push_back(row);
    }
    json j = {{"known", known}, {"trials", trials_json}, {"unassigned", b.unassigned}, {"errors", b.errors}};
    emit(c, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << "seed,limit_index,limit_label,iterations,final_objective\n";
  for (const auto& t : b.trials)
    os << t.seed << ',' << t.limit_index << ',' << t.limit_label << ',' << t.iterations << ','
       << real(t.final_objective) << '\n';
  for (std::size_t i = 0; i < b.known.size(); ++i)
    os << "# limit " << i << ' ' << trs::limit_label(b.known[i].kind) << " objective="
       << real(b.known[i].objective) << " count=" << b.counts[i] << '\n';
  os << "# unassigned=" << b.unassigned << " errors=" << b.errors << '\n';
  emit(c, os.str());
  return kOk;
}

int cmd_bench(const std::string& file, const Common& c, const std::string& methods, std::size_t reps) {
  const trs::AnyProblem p = trs::read_problem_file(file);
  std::vector<trs::Method> list;
  std::stringstream ss(methods);
  std::string item;
  while (std::getline(ss, item, ',')) list.push_back(trs::parse_method(item));
  const auto rows = trs::run_bench(p, list, run_options(c), reps);
  if (c.format == "json") {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"method", trs::to_string(r.method)},
                   {"repetitions", r.repetitions},
                   {"iterations", r.iterations},
                   {"wall_seconds", r.wall_seconds},
                   {"matvecs", r.matvecs},
                   {"matvecs_per_iteration", r.matvecs_per_iteration},
                   {"error", r.error},
                   {"zero_start_iterations", r.zero_start_iterations},
                   {"random_start_iterations", r.random_start_iterations}});
    emit(c, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << "method,repetitions,iterations,wall_seconds,matvecs,matvecs_per_iteration,error,"
        "zero_start_iterations,random_start_iterations\n";
  for (const auto& r : rows)
    os << trs::to_string(r.method) << ',' << r.repetitions << ',' << r.iterations << ','
       << real(r.wall_seconds) << ',' << r.matvecs << ',' << real(r.matvecs_per_iteration) << ','
       << real(r.error) << ',' << r.zero_start_iterations << ',' << r.random_start_iterations << '\n';
  emit(c, os.str());
  return kOk;
}

int cmd_gap_demo(const Common& c, const std::vector<double>& taus, double compare_tol) {
  const trs::GapDemoReport g = trs::run_gap_demo(taus, compare_tol);
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& r : g.rows) {
      json row = {{"tau", r.tau}, {"global_value", r.global_value}, {"global_x", as_list(r.global_x)}};
      if (r.gap) {
        row["local_value"] = *r.local_value;
        row["local_x"] = as_list(*r.local_x);
        row["gap"] = *r.gap;
      }
      rows.push_back(row);
    }
    json j = {{"rows", rows}, {"decreasing", g.decreasing}};
    if (g.wrong_selection)
      j["wrong_selection"] = {{"tau", g.wrong_selection->tau},
                              {"seed", g.wrong_selection->seed},
                              {"compare_tol", g.wrong_selection->compare_tol},
                              {"picked_objective", g.wrong_selection->picked_objective},
                              {"global_objective", g.wrong_selection->global_objective},
                              {"picked_x", as_list(g.wrong_selection->picked_x)}};
    emit(c, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream os;
  os << "tau,global_value,local_value,gap\n";
  for (const auto& r : g.rows)
    os << real(r.tau) << ',' << real(r.global_value) << ',' << (r.local_value ? real(*r.local_value) : "")
       << ',' << (r.gap ? real(*r.gap) : "") << '\n';
  os << "# decreasing=" << (g.decreasing ? "true" : "false") << '\n';
  if (g.wrong_selection)
    os << "# double-start with compare_tol=" << real(g.wrong_selection->compare_tol) << " at tau="
       << real(g.wrong_selection->tau) << " seed=" << g.wrong_selection->seed
       << " returned objective=" << real(g.wrong_selection->picked_objective)
       << " instead of global=" << real(g.wrong_selection->global_objective) << '\n';
  else
    os << "# no wrong double-start selection found\n";
  emit(c, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-region subproblem toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string file;
  std::optional<double> reference;
  double tail = 0.5;
  std::size_t trials = 200;
  std::string kind = "easy";
  std::size_t n = 4;
  double tau = 0.0;
  std::string methods = "pg,alg1,double,two-stage,oracle";
  std::size_t reps = 1;
  std::vector<double> taus = {1e-1, 1e-2, 1e-3};
  double compare_tol = 1e-3;

  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", file, "problem file")->required();
  add_common(solve, c);
  solve->add_option("--init", c.init, "zero|seed|explicit starting point");
  solve->add_option("--x0", c.x0, "comma-separated explicit starting point");

  auto* classify = app.add_subcommand("classify", "report the case of a problem file");
  classify->add_option("file", file, "problem file")->required();
  add_common(classify, c, false);

  auto* gen = app.add_subcommand("generate", "write a generated instance");
  gen->add_option("--kind", kind, "example1|example2|example3|easy|hard2|ill|convex|scalar|sphere");
  gen->add_option("--n", n, "dimension");
  gen->add_option("--tau", tau, "example2 parameter");
  add_common(gen, c, false);

  auto* trace = app.add_subcommand("trace", "per-iteration trace with a rate verdict");
  trace->add_option("file", file, "problem file")->required();
  add_common(trace, c);
  trace->add_option("--init", c.init, "zero|seed|explicit starting point");
  trace->add_option("--x0", c.x0, "comma-separated explicit starting point");
  trace->add_option("--reference", reference, "explicit reference objective for the gap");
  trace->add_option("--tail", tail, "tail fraction used for the rate fit");

  auto* basin = app.add_subcommand("basin", "limit accounting over seeded starts");
  basin->add_option("file", file, "problem file")->required();
  add_common(basin, c);
  basin->add_option("--trials", trials, "number of trials");

  auto* bench = app.add_subcommand("bench", "iterations, time and mat-vecs per method");
  bench->add_option("file", file, "problem file")->required();
  add_common(bench, c, false);
  bench->add_option("--methods", methods, "comma-separated methods");
  bench->add_option("--trials", reps, "repetitions per method");

  auto* gap = app.add_subcommand("gap-demo", "global/local gap on the near-tie family");
  add_common(gap, c, false);
  gap->add_option("--tau", taus, "tau values");
  gap->add_option("--compare-tol", compare_tol, "double-start comparison tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(file, c);
    if (*classify) return cmd_classify(file, c);
    if (*gen) return cmd_generate(kind, n, tau, c);
    if (*trace) return cmd_trace(file, c, reference, tail);
    if (*basin) return cmd_basin(file, c, trials);
    if (*bench) return cmd_bench(file, c, methods, reps);
    if (*gap) return cmd_gap_demo(c, taus, compare_tol);
  } catch (const trs::ParseError& e) {
    std::cerr << "trs: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const trs::CapabilityError& e) {
    std::cerr << "trs: " << e.what() << '\n';
    return kCapability;
  } catch (const trs::SolverAnomaly& e) {
    std::cerr << "trs: solver anomaly: " << e.what() << '\n';
    return kAnomaly;
  } catch (const trs::Error& e) {
    std::cerr << "trs: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}
