#include "degen/driver.hpp"

#include <cmath>

#include "degen/problems.hpp"

namespace degen {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ssqpa: return "ssqpa";
    case Algorithm::ssqp: return "ssqp";
    case Algorithm::sqp: return "sqp";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "ssqpa") return Algorithm::ssqpa;
  if (s == "ssqp") return Algorithm::ssqp;
  if (s == "sqp") return Algorithm::sqp;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0,1)");
  IdParams{tau, tau_hat}.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::subproblem_failure: return "subproblem_failure";
    case SolveStatus::identification_failure: return "identification_failure";
  }
  return "?";
}

namespace {

bool has_distance(const Problem& p) {
  return p.metadata && p.metadata->slam_vertices.size() <= 2;
}

std::optional<double> maybe_distance(const Problem& p, const Iterate& it) {
  if (!has_distance(p)) return std::nullopt;
  return distance_to_solution(p, it);
}

double max_complementarity(const Problem& p, const Iterate& it, double mu,
                           const SubproblemResult& r) {
  double worst = 0.0;
  for (int i = 0; i < p.m; ++i) {
    const double lin = p.constraints[i].eval(it.z) + dot(p.constraints[i].gradient(it.z), r.dz) -
                       mu * (r.lambda_plus[i] - it.lambda[i]);
    worst = std::max(worst, std::fabs(std::min(r.lambda_plus[i], -lin)));
  }
  return worst;
}

void fill_q_ratios(SolveTrace& trace) {
  // same computation as q_order_ratios, without the precondition throw
  int usable = 0;
  auto value = [](const IterRecord& r) { return r.delta ? *r.delta : r.eta; };
  for (const auto& r : trace.iterations)
    if (value(r) > 1e-13) ++usable;
  if (usable < 3) return;
  for (size_t k = 0; k + 1 < trace.iterations.size(); ++k) {
    const double a = value(trace.iterations[k]);
    const double b = value(trace.iterations[k + 1]);
    if (a > 1e-13 && a < 1.0 && b > 1e-13 && b < 1.0)
      trace.q_ratios.push_back(std::log(b) / std::log(a));
  }
}

SolveTrace run_common(const Problem& p, const Iterate& start, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  const bool adjusting = cfg.algorithm == Algorithm::ssqpa;
  const IdParams idp{cfg.tau, cfg.tau_hat};

  SolveTrace trace;
  Iterate cur = start;
  int n_aplus = 0, n_a0 = 0;

  if (adjusting) {
    try {
      const ActiveSetResult id = classify_active_set(p, cur, idp);
      const InteriorEstimate est = interior_multiplier(p, cur, id.strongly, cfg.tau);
      cur.lambda = est.lambda_hat;
      n_aplus = static_cast<int>(id.strongly.size());
      n_a0 = static_cast<int>(id.weakly.size());
    } catch (const IdentificationError& e) {
      trace.status = SolveStatus::identification_failure;
      trace.failure_message = e.what();
      return trace;
    }
  }

  bool next_adjusted = false;
  double next_shift = 0.0;
  for (int k = 0;; ++k) {
    double eta_k = eta(p, cur).eta;
    double mu_k = cfg.algorithm == Algorithm::sqp ? 0.0 : std::pow(eta_k, cfg.sigma);

    IterRecord row;
    row.k = k;
    row.eta = eta_k;
    row.delta = maybe_distance(p, cur);
    row.mu = mu_k;
    row.n_aplus = n_aplus;
    row.n_a0 = n_a0;
    row.adjusted = next_adjusted;
    row.hessian_shift = next_shift;
    trace.iterations.push_back(row);
    trace.iterates.push_back(cur);

    if (eta_k < cfg.tol) {
      trace.status = SolveStatus::converged;
      break;
    }
    if (k >= cfg.max_iter) {
      trace.status = SolveStatus::max_iter;
      break;
    }

    int adjustments = 0;
    bool stepped = false;
    while (!stepped) {
      SubproblemResult sub;
      try {
        sub = solve_subproblem(p, cur, mu_k);
      } catch (const SubproblemError& e) {
        trace.status = SolveStatus::subproblem_failure;
        trace.failure_message = e.what();
        fill_q_ratios(trace);
        return trace;
      }
      SubproblemAudit audit;
      audit.k = k;
      audit.kkt_residual = sub.kkt_residual;
      audit.max_complementarity = max_complementarity(p, cur, mu_k, sub);
      audit.hessian_shift = sub.hessian_shift;

      Vec z_new = cur.z;
      for (int j = 0; j < p.n; ++j) z_new[j] += sub.dz[j];
      Iterate cand(std::move(z_new), sub.lambda_plus);
      const double eta_new = eta(p, cand).eta;

      const bool accept =
          !adjusting || eta_new <= std::pow(eta_k, 1.0 + cfg.sigma / 2.0);
      audit.accepted = accept;
      trace.subproblem_solves.push_back(audit);

      if (accept) {
        cur = std::move(cand);
        next_adjusted = adjustments > 0;
        next_shift = sub.hessian_shift;
        stepped = true;
        break;
      }

      // multiplier adjustment at the current iterate, then retry
      if (++adjustments > 3) {
        trace.status = SolveStatus::identification_failure;
        trace.failure_message = "acceptance test failed after 3 consecutive adjustments";
        fill_q_ratios(trace);
        return trace;
      }
      try {
        const ActiveSetResult id = classify_active_set(p, cur, idp);
        const InteriorEstimate est = interior_multiplier(p, cur, id.strongly, cfg.tau);
        cur.lambda = est.lambda_hat;
        n_aplus = static_cast<int>(id.strongly.size());
        n_a0 = static_cast<int>(id.weakly.size());
      } catch (const IdentificationError& e) {
        trace.status = SolveStatus::identification_failure;
        trace.failure_message = e.what();
        fill_q_ratios(trace);
        return trace;
      }
      eta_k = eta(p, cur).eta;
      mu_k = std::pow(eta_k, cfg.sigma);
    }
  }

  fill_q_ratios(trace);
  return trace;
}

}  // namespace

SolveTrace run_ssqpa(const Problem& p, const Iterate& start, const SolverConfig& cfg) {
  if (cfg.algorithm != Algorithm::ssqpa)
    throw std::invalid_argument("run_ssqpa requires algorithm = ssqpa");
  return run_common(p, start, cfg);
}

SolveTrace run_baseline(const Problem& p, const Iterate& start, const SolverConfig& cfg) {
  if (cfg.algorithm == Algorithm::ssqpa)
    throw std::invalid_argument("run_baseline requires algorithm = ssqp or sqp");
  return run_common(p, start, cfg);
}

Vec q_order_ratios(const SolveTrace& trace) {
  auto value = [](const IterRecord& r) { return r.delta ? *r.delta : r.eta; };
  int usable = 0;
  for (const auto& r : trace.iterations)
    if (value(r) > 1e-13) ++usable;
  if (usable < 3)
    throw std::invalid_argument("q_order_ratios needs at least 3 iterations above the 1e-13 floor");
  Vec ratios;
  for (size_t k = 0; k + 1 < trace.iterations.size(); ++k) {
    const double a = value(trace.iterations[k]);
    const double b = value(trace.iterations[k + 1]);
    if (a > 1e-13 && a < 1.0 && b > 1e-13 && b < 1.0)
      ratios.push_back(std::log(b) / std::log(a));
  }
  return ratios;
}

}  // namespace degen
