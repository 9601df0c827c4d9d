// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "degen/active_id.hpp"
#include "degen/driver.hpp"
#include "degen/problems.hpp"
#include "degen/subproblem.hpp"
#include "oracles.hpp"

using namespace degen;

namespace {

struct Check {
  int failures = 0;
  int checks = 0;
  std::ostringstream detail;
  std::string note;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (failures <= 5) detail << "\n    " << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const std::vector<std::string> kAc4Problems = {"weak1", "dep1", "degen-full"};
constexpr int kAc4RunsPerProblem = 20;

// AC4/AC5/AC7 share these runs.
struct Ac4Run {
  std::string problem;
  SolveTrace trace;
  double seconds = 0.0;
};

const std::vector<Ac4Run>& ac4_runs() {
  static const std::vector<Ac4Run> runs = [] {
    std::vector<Ac4Run> out;
    SolverConfig cfg;
    cfg.algorithm = Algorithm::ssqpa;
    cfg.sigma = 0.5;
    cfg.tau = 0.6;
    cfg.tau_hat = 0.3;
    cfg.tol = 1e-10;
    cfg.max_iter = 50;
    uint64_t seed = 1000;
    for (const auto& name : kAc4Problems) {
      const Problem p = get_problem(name);
      Rng rng(seed++);
      for (int trial = 0; trial < kAc4RunsPerProblem; ++trial) {
        const Iterate start = perturbed_start(p, 7e-3, rng);
        const auto t0 = std::chrono::steady_clock::now();
        Ac4Run run;
        run.problem = name;
        run.trace = run_ssqpa(p, start, cfg);
        run.seconds = seconds_since(t0);
        out.push_back(std::move(run));
      }
    }
    return out;
  }();
  return runs;
}

// the worked identification state on degen-full
const Iterate& worked_state() {
  static const Iterate it({-0.01, -0.01}, {0.5, 0.25, 0.001});
  return it;
}

void ac1_classification(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  int correct = 0, total = 0;
  uint64_t seed = 100;
  for (const auto& name : problem_names()) {
    const Problem p = get_problem(name);
    Rng rng(seed++);
    for (int trial = 0; trial < 200; ++trial) {
      const Iterate it = perturbed_start(p, 7e-4, rng);
      c.expect(distance_to_solution(p, it) <= 1e-3, name + ": start outside delta <= 1e-3");
      const ActiveSetResult res = classify_active_set(p, it, IdParams{0.6, 0.3});
      ++total;
      if (res.strongly == p.metadata->b_plus && res.weakly == p.metadata->b_zero) ++correct;
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(correct == 1000 && total == 1000,
           "classification " + std::to_string(correct) + "/1000");
  c.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + " s exceeds 5 s");
  c.note = std::to_string(correct) + "/1000 correct splits in " + fmt(elapsed) + " s";
}

void ac2_worked_trace(Check& c) {
  const Problem p3 = get_problem("degen-full");
  // independent hand evaluation: stationarity (-0.01, -0.009),
  // complementarity (0.01, 0.02, 0.001)
  const double eta_expected =
      std::sqrt(0.01 * 0.01 + 0.009 * 0.009 + 0.01 * 0.01 + 0.02 * 0.02 + 0.001 * 0.001);
  const double eta_value = eta(p3, worked_state()).eta;
  c.expect(std::fabs(eta_value - eta_expected) <= 1e-5,
           "eta " + fmt(eta_value) + " vs " + fmt(eta_expected));

  const ActiveSetResult res = classify_active_set(p3, worked_state(), IdParams{0.5, 0.25});
  c.expect(res.loop_trace.size() == 2, "expected a two-pass loop");
  if (res.loop_trace.size() == 2) {
    c.expect(res.loop_trace[0].working_set == std::vector<int>{1, 2},
             "initial working set is not {2,3}");
    const double w = std::pow(eta_expected, 0.5);
    const double lp1_expected = (1.01 + w) / 2.0 + (0.01 + w);
    c.expect(std::fabs(res.loop_trace[0].lp_objective - lp1_expected) <= 1e-4,
             "first LP objective " + fmt(res.loop_trace[0].lp_objective) + " vs " +
                 fmt(lp1_expected));
    c.expect(res.loop_trace[0].removed == std::vector<int>{1}, "removed set is not {2}");
  }
  c.expect(res.strongly == std::vector<int>{0, 1}, "A+ is not {1,2}");
  c.expect(res.weakly == std::vector<int>{2}, "A0 is not {3}");
  c.note = "eta=" + fmt(eta_value) + ", lp1=" +
           (res.loop_trace.empty() ? "?" : fmt(res.loop_trace[0].lp_objective)) +
           ", A+={1,2}, A0={3}";
}

void ac3_interior_multiplier(Check& c) {
  const Problem p3 = get_problem("degen-full");
  const double eps3 = *epsilon_lambda(p3);
  c.expect(std::fabs(eps3 - 1.0 / 3.0) <= 1e-9, "epsilon_lambda(degen-full) != 1/3");
  const double eta3 =
      std::sqrt(0.01 * 0.01 + 0.009 * 0.009 + 0.01 * 0.01 + 0.02 * 0.02 + 0.001 * 0.001);
  const double t3_expected = (1.01 + std::pow(eta3, 0.5)) / 3.0;
  const InteriorEstimate e3 = interior_multiplier(p3, worked_state(), {0, 1}, 0.5);
  c.expect(std::fabs(e3.t_hat - t3_expected) <= 1e-4,
           "degen-full t_hat " + fmt(e3.t_hat) + " vs " + fmt(t3_expected));
  c.expect(e3.t_hat >= eps3 - 1e-9, "t_hat below epsilon_lambda");

  const Problem p2 = get_problem("dep1");
  const Iterate it2({-1e-4}, {0.34, 0.33});
  const double eta2 = std::sqrt(1e-8 + 1e-8 + 4e-8);
  const double t2_expected = (1.0001 + std::pow(eta2, 0.5)) / 3.0;
  const InteriorEstimate e2 = interior_multiplier(p2, it2, {0, 1}, 0.5);
  c.expect(std::fabs(e2.t_hat - t2_expected) <= 1e-4,
           "dep1 t_hat " + fmt(e2.t_hat) + " vs " + fmt(t2_expected));
  c.expect(e2.t_hat >= 1.0 / 3.0 - 1e-9, "dep1 t_hat below 1/3");
  c.note = "t_hat(degen-full)=" + fmt(e3.t_hat) + " >= 1/3, t_hat(dep1)=" + fmt(e2.t_hat) +
           " >= 1/3";
}

void ac4_superlinear(Check& c) {
  int converged = 0;
  int max_k = 0;
  double worst_seconds = 0.0;
  for (const Ac4Run& run : ac4_runs()) {
    worst_seconds = std::max(worst_seconds, run.seconds);
    c.expect(run.seconds < 1.0, run.problem + ": run took " + fmt(run.seconds) + " s");
    c.expect(run.trace.status == SolveStatus::converged, run.problem + ": did not converge");
    if (run.trace.status == SolveStatus::converged) ++converged;
    const auto& rows = run.trace.iterations;
    if (!rows.empty()) {
      c.expect(rows.back().k <= 8,
               run.problem + ": " + std::to_string(rows.back().k) + " iterations");
      max_k = std::max(max_k, rows.back().k);
    }
    for (size_t k = 0; k + 1 < rows.size(); ++k) {
      const auto& dk = rows[k].delta;
      const auto& dk1 = rows[k + 1].delta;
      if (!dk || !dk1) continue;
      if (*dk > 1e-12 && *dk <= 1e-2)
        c.expect(*dk1 <= std::pow(*dk, 1.2),
                 run.problem + ": delta " + fmt(*dk) + " -> " + fmt(*dk1));
      if (rows[k + 1].k >= 2)
        c.expect(!rows[k + 1].adjusted, run.problem + ": adjustment after iteration 0");
    }
  }
  c.note = std::to_string(converged) + "/" + std::to_string(ac4_runs().size()) +
           " converged, max " + std::to_string(max_k) + " iterations, slowest run " +
           fmt(worst_seconds) + " s";
}

void ac5_multiplier_floor(Check& c) {
  std::map<std::string, double> floors;
  floors["dep1"] = *epsilon_lambda(get_problem("dep1")) / 4.0;
  floors["degen-full"] = *epsilon_lambda(get_problem("degen-full")) / 4.0;
  double worst_margin = kInf;
  for (const Ac4Run& run : ac4_runs()) {
    const auto it = floors.find(run.problem);
    if (it == floors.end()) continue;
    const Problem p = get_problem(run.problem);
    for (const Iterate& iterate : run.trace.iterates)
      for (int i : p.metadata->b_plus) {
        c.expect(iterate.lambda[i] >= it->second,
                 run.problem + ": lambda_" + std::to_string(i + 1) + " = " +
                     fmt(iterate.lambda[i]) + " below " + fmt(it->second));
        worst_margin = std::min(worst_margin, iterate.lambda[i] - it->second);
      }
  }
  c.note = "min margin above eps_lambda/4: " + fmt(worst_margin);
}

void ac6_lp_oracle(Check& c) {
  Rng rng(424242);
  int feasible_count = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const LpProblem lp = testing::random_boxed_lp(rng);
    const LpSolution sol = solve_lp(lp);
    const auto oracle = testing::lp_vertex_oracle(lp);
    if (oracle.feasible) {
      ++feasible_count;
      c.expect(sol.status == LpStatus::optimal, "solver missed a feasible instance");
      if (sol.status == LpStatus::optimal) {
        const double gap = std::fabs(sol.objective_value - oracle.objective);
        worst_gap = std::max(worst_gap, gap);
        c.expect(gap <= 1e-7, "objective gap " + fmt(gap));
      }
    } else {
      c.expect(sol.status == LpStatus::infeasible, "solver found the infeasible feasible");
    }
  }
  // warm-started objective-only re-solves
  Rng rng2(424243);
  int warm_checked = 0;
  double worst_warm_gap = 0.0;
  while (warm_checked < 30) {
    LpProblem lp = testing::random_boxed_lp(rng2);
    const LpSolution first = solve_lp(lp);
    if (first.status != LpStatus::optimal) continue;
    ++warm_checked;
    for (double& v : lp.objective) v = rng2.uniform(-2.0, 2.0);
    const LpSolution cold = solve_lp(lp);
    const LpSolution warm = solve_lp(lp, &first.basis);
    c.expect(cold.status == LpStatus::optimal && warm.status == LpStatus::optimal,
             "re-solve lost optimality");
    if (cold.status == LpStatus::optimal && warm.status == LpStatus::optimal) {
      const double gap = std::fabs(cold.objective_value - warm.objective_value);
      worst_warm_gap = std::max(worst_warm_gap, gap);
      c.expect(gap <= 1e-9, "warm/cold gap " + fmt(gap));
    }
  }
  c.note = std::to_string(feasible_count) + "/100 feasible, worst gap " + fmt(worst_gap) +
           ", worst warm/cold gap " + fmt(worst_warm_gap);
}

void ac7_subproblem_residuals(Check& c) {
  double worst_residual = 0.0, worst_comp = 0.0;
  size_t solves = 0;
  for (const Ac4Run& run : ac4_runs()) {
    for (const SubproblemAudit& a : run.trace.subproblem_solves) {
      ++solves;
      worst_residual = std::max(worst_residual, a.kkt_residual);
      worst_comp = std::max(worst_comp, a.max_complementarity);
      c.expect(a.kkt_residual <= 1e-9, run.problem + ": residual " + fmt(a.kkt_residual));
      c.expect(a.max_complementarity <= 1e-9,
               run.problem + ": complementarity " + fmt(a.max_complementarity));
    }
  }
  // hand-solved stabilized step on weak1
  const Problem p1 = get_problem("weak1");
  const SubproblemResult r = solve_subproblem(p1, Iterate({0.1}, {0.05}), 0.1);
  c.expect(std::fabs(r.dz[0] - (-0.104167)) <= 1e-6, "dz " + fmt(r.dz[0]));
  c.expect(std::fabs(r.lambda_plus[0] - 0.008333) <= 1e-6, "lambda+ " + fmt(r.lambda_plus[0]));
  c.note = std::to_string(solves) + " solves audited, worst residual " + fmt(worst_residual) +
           ", worst complementarity " + fmt(worst_comp);
}

void ac8_eta_delta_bracket(Check& c) {
  Rng rng(515151);
  std::ostringstream report;
  for (const auto& name : problem_names()) {
    const Problem p = get_problem(name);
    double lo = kInf, hi = 0.0;
    int kept = 0;
    while (kept < 100) {
      const double radius = std::pow(10.0, rng.uniform(-6.0, -2.0));
      const Iterate it = perturbed_start(p, radius, rng);
      const double delta = distance_to_solution(p, it);
      if (delta < 1e-6 || delta > 1e-2) continue;
      ++kept;
      const double ratio = eta(p, it).eta / delta;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      c.expect(ratio >= 0.05 && ratio <= 50.0, name + ": ratio " + fmt(ratio));
    }
    report << " " << name << " [" << fmt(lo) << ", " << fmt(hi) << "]";
  }
  c.note = "eta/delta per problem:" + report.str();
}

void ac9_derivative_checks(Check& c) {
  Rng rng(616161);
  double worst = 0.0;
  for (const auto& name : problem_names()) {
    const Problem p = get_problem(name);
    for (int trial = 0; trial < 20; ++trial) {
      Vec z = p.metadata->z_star;
      for (int j = 0; j < p.n; ++j) z[j] += rng.uniform(-0.5, 0.5);
      const double err = check_derivatives(p, z, 1e-5).max_error();
      worst = std::max(worst, err);
      c.expect(err <= 1e-6, name + ": relative error " + fmt(err));
    }
  }
  c.note = "worst relative error " + fmt(worst);
}

}  // namespace

int main() {
  using Criterion = std::pair<const char*, std::function<void(Check&)>>;
  const std::vector<Criterion> criteria = {
      {"AC1", ac1_classification},     {"AC2", ac2_worked_trace},
      {"AC3", ac3_interior_multiplier}, {"AC4", ac4_superlinear},
      {"AC5", ac5_multiplier_floor},   {"AC6", ac6_lp_oracle},
      {"AC7", ac7_subproblem_residuals}, {"AC8", ac8_eta_delta_bracket},
      {"AC9", ac9_derivative_checks},
  };

  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Check c;
    std::string exception_text;
    try {
      fn(c);
    } catch (const std::exception& e) {
      exception_text = e.what();
    }
    const bool ok = c.failures == 0 && exception_text.empty();
    if (ok) {
      std::printf("%s: PASS — %s\n", id, c.note.c_str());
    } else {
      ++failed;
      std::printf("%s: FAIL — %d/%d checks failed%s%s%s\n", id, c.failures, c.checks,
                  exception_text.empty() ? "" : " (exception: ",
                  exception_text.c_str(), exception_text.empty() ? "" : ")");
      if (c.failures > 0) std::printf("%s\n", c.detail.str().c_str());
    }
  }
  return failed;
}
