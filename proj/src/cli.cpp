#include "degen/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "degen/driver.hpp"
#include "degen/format.hpp"
#include "degen/problems.hpp"
#include "degen/trace_io.hpp"

namespace degen {
namespace {

using nlohmann::json;

enum class LogLevel { quiet = 0, info = 1, trace = 2 };

LogLevel log_level() {
  const char* env = std::getenv("DEGEN_NLP_LOG");
  if (env == nullptr) return LogLevel::quiet;
  const std::string v = env;
  if (v == "trace") return LogLevel::trace;
  if (v == "info") return LogLevel::info;
  return LogLevel::quiet;
}

// Comma-separated decimal literals, no whitespace.
Vec parse_vector(const std::string& text) {
  Vec v;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
    size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad vector component '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("bad vector component '" + tok + "'");
    v.push_back(x);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return v;
}

Problem resolve_problem(const std::string& name_or_path) {
  const auto names = problem_names();
  for (const auto& n : names)
    if (n == name_or_path) return get_problem(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_problem_file(name_or_path);
  throw std::invalid_argument("unknown problem '" + name_or_path +
                              "' (not a registry name or a readable file)");
}

void write_output(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write to '" + out_path + "'");
  f << content;
}

std::vector<int> to_one_based(const std::vector<int>& v) {
  std::vector<int> r;
  for (int i : v) r.push_back(i + 1);
  return r;
}

struct SolveArgs {
  std::string problem, z0, lambda0, algorithm = "ssqpa", format = "csv", out_path;
  SolverConfig cfg;
};

int do_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Problem p = resolve_problem(a.problem);
  const Vec z0 = parse_vector(a.z0);
  const Vec l0 = parse_vector(a.lambda0);
  if (static_cast<int>(z0.size()) != p.n)
    throw std::invalid_argument("--z0 must have " + std::to_string(p.n) + " components");
  if (static_cast<int>(l0.size()) != p.m)
    throw std::invalid_argument("--lambda0 must have " + std::to_string(p.m) + " components");
  const auto alg = algorithm_from_string(a.algorithm);
  if (!alg) throw std::invalid_argument("unknown algorithm '" + a.algorithm + "'");
  SolverConfig cfg = a.cfg;
  cfg.algorithm = *alg;
  cfg.validate();

  const Iterate start(z0, l0);
  const SolveTrace trace = cfg.algorithm == Algorithm::ssqpa ? run_ssqpa(p, start, cfg)
                                                             : run_baseline(p, start, cfg);

  if (log_level() >= LogLevel::trace)
    for (const auto& r : trace.iterations)
      err << "iter " << r.k << " eta=" << format_g17(r.eta) << " mu=" << format_g17(r.mu)
          << (r.adjusted ? " adjusted" : "") << "\n";
  if (log_level() >= LogLevel::info)
    err << p.name << ": " << to_string(trace.status) << " after "
        << (trace.iterations.empty() ? 0 : trace.iterations.back().k) << " iterations\n";

  write_output(a.format == "json" ? trace_to_json(trace) : trace_to_csv(trace), a.out_path, out);

  switch (trace.status) {
    case SolveStatus::converged: return 0;
    case SolveStatus::max_iter: return 1;
    case SolveStatus::subproblem_failure:
    case SolveStatus::identification_failure:
      err << "error: " << trace.failure_message << "\n";
      return 3;
  }
  return 3;
}

struct IdentifyArgs {
  std::string problem, z0, lambda0, out_path;
  double tau = 0.6, tau_hat = 0.3;
};

int do_identify(const IdentifyArgs& a, std::ostream& out, std::ostream& err) {
  const Problem p = resolve_problem(a.problem);
  const Vec z0 = parse_vector(a.z0);
  const Vec l0 = parse_vector(a.lambda0);
  if (static_cast<int>(z0.size()) != p.n || static_cast<int>(l0.size()) != p.m)
    throw std::invalid_argument("--z0/--lambda0 sizes do not match the problem");
  const Iterate it(z0, l0);
  const IdParams idp{a.tau, a.tau_hat};
  idp.validate();

  json j;
  try {
    const ActiveSetResult id = classify_active_set(p, it, idp);
    const InteriorEstimate est = interior_multiplier(p, it, id.strongly, a.tau);
    j["eta"] = eta(p, it).eta;
    j["a"] = to_one_based(id.estimated_active);
    j["a_plus"] = to_one_based(id.strongly);
    j["a_zero"] = to_one_based(id.weakly);
    j["loop_trace"] = json::array();
    for (const IdLoopStep& s : id.loop_trace) {
      json step;
      step["working_set"] = to_one_based(s.working_set);
      step["objective"] = s.lp_objective;
      step["removed"] = to_one_based(s.removed);
      j["loop_trace"].push_back(step);
    }
    j["t_hat"] = est.t_hat;
    j["lambda_hat"] = est.lambda_hat;
  } catch (const IdentificationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  write_output(j.dump(2) + "\n", a.out_path, out);
  return 0;
}

struct CheckArgs {
  std::string problem;
  uint64_t seed = 0;
  int points = 20;
  double step = 1e-5;
  double radius = 0.5;
};

int do_check_derivs(const CheckArgs& a, std::ostream& out, std::ostream&) {
  const Problem p = resolve_problem(a.problem);
  Rng rng(a.seed);
  double worst_grad = 0.0, worst_hess = 0.0;
  Vec center(p.n, 0.0);
  if (p.metadata) center = p.metadata->z_star;
  for (int s = 0; s < a.points; ++s) {
    Vec z = center;
    for (int j = 0; j < p.n; ++j) z[j] += rng.uniform(-a.radius, a.radius);
    const DerivativeReport rep = check_derivatives(p, z, a.step);
    worst_grad = std::max(worst_grad, rep.max_gradient_error);
    worst_hess = std::max(worst_hess, rep.max_hessian_error);
  }
  json j;
  j["problem"] = p.name;
  j["points"] = a.points;
  j["step"] = a.step;
  j["max_gradient_error"] = worst_grad;
  j["max_hessian_error"] = worst_hess;
  out << j.dump(2) << "\n";
  return std::max(worst_grad, worst_hess) <= 1e-6 ? 0 : 1;
}

struct ExperimentRun {
  std::string name;
  std::string problem_label;
  Problem problem;
  bool perturb = false;
  double radius = 0.0;
  uint64_t seed = 0;
  Vec z0, lambda0;
  SolverConfig cfg;
};

struct RunOutcome {
  SolveStatus status = SolveStatus::max_iter;
  double final_eta = 0.0;
  int iterations = 0;
  std::optional<double> min_q_ratio;
  std::optional<bool> classification_correct;
  std::string trace_file;
  std::string message;
};

SolverConfig solver_from_json(const json& j) {
  SolverConfig cfg;
  if (j.contains("algorithm")) {
    const auto alg = algorithm_from_string(j.at("algorithm").get<std::string>());
    if (!alg) throw std::invalid_argument("unknown algorithm in solver config");
    cfg.algorithm = *alg;
  }
  if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
  if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
  if (j.contains("tau_hat")) cfg.tau_hat = j.at("tau_hat").get<double>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
  cfg.validate();
  return cfg;
}

std::vector<ExperimentRun> parse_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config '" + path + "'");
  json doc = json::parse(f);  // throws json::parse_error with byte position
  std::vector<ExperimentRun> runs;
  if (!doc.contains("runs")) return runs;
  int index = 0;
  for (const json& rj : doc.at("runs")) {
    ExperimentRun run;
    run.name = rj.contains("name") ? rj.at("name").get<std::string>()
                                   : "run" + std::to_string(index);
    const json& pj = rj.at("problem");
    if (pj.is_string()) {
      run.problem_label = pj.get<std::string>();
      run.problem = get_problem(run.problem_label);
    } else {
      run.problem_label = pj.at("file").get<std::string>();
      run.problem = load_problem_file(run.problem_label);
    }
    const json& sj = rj.at("start");
    if (sj.contains("perturb")) {
      run.perturb = true;
      run.radius = sj.at("perturb").at("radius").get<double>();
      run.seed = sj.at("perturb").at("seed").get<uint64_t>();
      if (!run.problem.metadata)
        throw std::invalid_argument("run '" + run.name +
                                    "': perturb start requires ground-truth metadata");
    } else {
      run.z0 = sj.at("z0").get<Vec>();
      run.lambda0 = sj.at("lambda0").get<Vec>();
      if (static_cast<int>(run.z0.size()) != run.problem.n ||
          static_cast<int>(run.lambda0.size()) != run.problem.m)
        throw std::invalid_argument("run '" + run.name + "': start vector sizes do not match");
    }
    run.cfg = rj.contains("solver") ? solver_from_json(rj.at("solver")) : SolverConfig{};
    runs.push_back(std::move(run));
    ++index;
  }
  return runs;
}

RunOutcome execute_run(const ExperimentRun& run, const std::string& out_dir) {
  RunOutcome outcome;
  Iterate start;
  if (run.perturb) {
    Rng rng(run.seed);
    start = perturbed_start(run.problem, run.radius, rng);
  } else {
    start = Iterate(run.z0, run.lambda0);
  }

  if (run.cfg.algorithm == Algorithm::ssqpa && run.problem.metadata) {
    try {
      const ActiveSetResult id =
          classify_active_set(run.problem, start, IdParams{run.cfg.tau, run.cfg.tau_hat});
      outcome.classification_correct = id.strongly == run.problem.metadata->b_plus &&
                                       id.weakly == run.problem.metadata->b_zero;
    } catch (const IdentificationError&) {
      outcome.classification_correct = false;
    }
  }

  const SolveTrace trace = run.cfg.algorithm == Algorithm::ssqpa
                               ? run_ssqpa(run.problem, start, run.cfg)
                               : run_baseline(run.problem, start, run.cfg);
  outcome.status = trace.status;
  outcome.message = trace.failure_message;
  if (!trace.iterations.empty()) {
    outcome.final_eta = trace.iterations.back().eta;
    outcome.iterations = trace.iterations.back().k;
  }
  if (!trace.q_ratios.empty())
    outcome.min_q_ratio = *std::min_element(trace.q_ratios.begin(), trace.q_ratios.end());

  const std::string file = out_dir + "/" + run.name + ".csv";
  std::ofstream f(file);
  if (!f) throw std::runtime_error("cannot write trace file '" + file + "'");
  f << trace_to_csv(trace);
  outcome.trace_file = file;
  return outcome;
}

struct ExperimentArgs {
  std::string config_path;
  std::string out_dir = ".";
  int workers = 1;
};

int do_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<ExperimentRun> runs;
  try {
    runs = parse_experiment_config(a.config_path);
  } catch (const json::exception& e) {
    err << "error: config '" << a.config_path << "': " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::filesystem::create_directories(a.out_dir);
  std::vector<RunOutcome> outcomes(runs.size());
  std::vector<std::string> failures(runs.size());
  std::atomic<size_t> next{0};
  const int nworkers = std::max(1, std::min<int>(a.workers, static_cast<int>(runs.size())));

  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= runs.size()) break;
      try {
        outcomes[i] = execute_run(runs[i], a.out_dir);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  if (nworkers <= 1 || runs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t i = 0; i < runs.size(); ++i)
    if (!failures[i].empty()) {
      err << "error: run '" << runs[i].name << "': " << failures[i] << "\n";
      return 2;
    }

  json summary;
  summary["schema"] = "degen-nlp-summary-v1";
  summary["n_runs"] = runs.size();
  int converged = 0;
  summary["runs"] = json::array();
  for (size_t i = 0; i < runs.size(); ++i) {
    const RunOutcome& oc = outcomes[i];
    if (oc.status == SolveStatus::converged) ++converged;
    json rj;
    rj["name"] = runs[i].name;
    rj["problem"] = runs[i].problem_label;
    rj["status"] = to_string(oc.status);
    rj["final_eta"] = oc.final_eta;
    rj["iterations"] = oc.iterations;
    rj["min_q_ratio"] = oc.min_q_ratio ? json(*oc.min_q_ratio) : json(nullptr);
    rj["classification_correct"] =
        oc.classification_correct ? json(*oc.classification_correct) : json(nullptr);
    rj["trace_file"] = oc.trace_file;
    if (!oc.message.empty()) rj["message"] = oc.message;
    summary["runs"].push_back(rj);
  }
  summary["n_converged"] = converged;

  const std::string summary_text = summary.dump(2) + "\n";
  out << summary_text;
  std::ofstream sf(a.out_dir + "/summary.json");
  if (sf) sf << summary_text;

  return converged == static_cast<int>(runs.size()) ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"active-set identification and stabilized SQP for degenerate NLPs"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "run a solver and emit its trace");
  solve->add_option("--problem", sa.problem, "registry name or problem file")->required();
  solve->add_option("--z0", sa.z0, "comma-separated start point")->required();
  solve->add_option("--lambda0", sa.lambda0, "comma-separated start multipliers")->required();
  solve->add_option("--algorithm", sa.algorithm, "ssqpa|ssqp|sqp");
  solve->add_option("--sigma", sa.cfg.sigma, "stabilization exponent");
  solve->add_option("--tau", sa.cfg.tau, "active-set threshold exponent");
  solve->add_option("--tau-hat", sa.cfg.tau_hat, "classification threshold exponent");
  solve->add_option("--tol", sa.cfg.tol, "termination tolerance on eta");
  solve->add_option("--max-iter", sa.cfg.max_iter, "iteration cap");
  solve->add_option("--format", sa.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  solve->add_option("--out", sa.out_path, "write the trace here instead of stdout");

  IdentifyArgs ia;
  CLI::App* identify = app.add_subcommand("identify", "classify constraints at a point");
  identify->add_option("--problem", ia.problem)->required();
  identify->add_option("--z0", ia.z0)->required();
  identify->add_option("--lambda0", ia.lambda0)->required();
  identify->add_option("--tau", ia.tau);
  identify->add_option("--tau-hat", ia.tau_hat);
  identify->add_option("--out", ia.out_path);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check-derivs", "finite-difference derivative audit");
  check->add_option("--problem", ca.problem)->required();
  check->add_option("--seed", ca.seed);
  check->add_option("--points", ca.points);
  check->add_option("--step", ca.step);
  check->add_option("--radius", ca.radius);

  ExperimentArgs ea;
  CLI::App* experiment = app.add_subcommand("experiment", "run a batch of solves from a config");
  experiment->add_option("config", ea.config_path, "JSON experiment config")->required();
  experiment->add_option("--out-dir", ea.out_dir, "directory for traces and summary");
  experiment->add_option("--workers", ea.workers, "parallel run count");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (solve->parsed()) return do_solve(sa, out, err);
    if (identify->parsed()) return do_identify(ia, out, err);
    if (check->parsed()) return do_check_derivs(ca, out, err);
    if (experiment->parsed()) return do_experiment(ea, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace degen
