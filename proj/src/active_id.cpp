#include "degen/active_id.hpp"

#include <algorithm>
#include <cmath>

namespace degen {

void IdParams::validate() const {
  if (!(0.0 < tau_hat && tau_hat < tau && tau < 1.0))
    throw std::invalid_argument("identification requires 0 < tau_hat < tau < 1");
}

std::vector<int> estimate_active(const Problem& p, const Iterate& it, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  const double threshold = -std::pow(eta(p, it).eta, tau);
  std::vector<int> active;
  for (int i = 0; i < p.m; ++i)
    if (p.constraints[i].eval(it.z) >= threshold) active.push_back(i);
  return active;
}

LpProblem build_estimation_lp(const Problem& p, const Iterate& it, const std::vector<int>& active,
                         const std::vector<int>& a_hat, double tau) {
  for (int i : a_hat)
    if (std::find(active.begin(), active.end(), i) == active.end())
      throw std::invalid_argument("a_hat must be a subset of the active estimate");

  const double width = std::pow(eta(p, it).eta, tau);
  const Vec grad_phi = p.objective.gradient(it.z);
  const int nv = static_cast<int>(active.size());

  LpProblem lp = LpProblem::sized(nv, p.n);
  for (int c = 0; c < nv; ++c) {
    if (std::find(a_hat.begin(), a_hat.end(), active[c]) != a_hat.end()) lp.objective[c] = 1.0;
    const Vec gi = p.constraints[active[c]].gradient(it.z);
    for (int r = 0; r < p.n; ++r) lp.rows(r, c) = gi[r];
  }
  for (int r = 0; r < p.n; ++r) {
    lp.row_lower[r] = -width - grad_phi[r];
    lp.row_upper[r] = width - grad_phi[r];
  }
  return lp;
}

namespace {

LpSolution solve_or_throw(const LpProblem& lp, const LpBasis* warm, const char* what) {
  const LpSolution sol = solve_lp(lp, warm);
  switch (sol.status) {
    case LpStatus::optimal:
      return sol;
    case LpStatus::infeasible:
      throw IdentificationError(IdentificationError::Kind::point_too_far,
                                std::string(what) +
                                    " is infeasible: point too far from the solution set");
    case LpStatus::unbounded:
      throw IdentificationError(IdentificationError::Kind::unbounded_multipliers,
                                std::string(what) + " is unbounded at this point");
    case LpStatus::breakdown:
      break;
  }
  throw IdentificationError(IdentificationError::Kind::lp_failure,
                            std::string(what) + ": simplex breakdown");
}

}  // namespace

ActiveSetResult classify_active_set(const Problem& p, const Iterate& it, const IdParams& params) {
  params.validate();
  const double eta_value = eta(p, it).eta;
  const double keep_threshold = std::pow(eta_value, params.tau_hat);

  ActiveSetResult res;
  res.estimated_active = estimate_active(p, it, params.tau);

  std::vector<int> a_hat;
  for (int i : res.estimated_active)
    if (!(it.lambda[i] >= keep_threshold)) a_hat.push_back(i);

  if (a_hat.empty()) {
    // nothing is a weak candidate; no LP needed
    res.strongly = res.estimated_active;
    return res;
  }

  LpBasis warm;
  const size_t max_passes = a_hat.size() + 1;
  for (size_t pass = 0; pass < max_passes; ++pass) {
    const LpProblem lp = build_estimation_lp(p, it, res.estimated_active, a_hat, params.tau);
    const LpSolution sol = solve_or_throw(lp, warm.empty() ? nullptr : &warm, "estimation LP");
    warm = sol.basis;

    IdLoopStep step;
    step.working_set = a_hat;
    step.lp_objective = sol.objective_value;
    for (size_t c = 0; c < res.estimated_active.size(); ++c) {
      const int i = res.estimated_active[c];
      if (std::find(a_hat.begin(), a_hat.end(), i) != a_hat.end() &&
          sol.point[c] >= keep_threshold)
        step.removed.push_back(i);
    }
    res.loop_trace.push_back(step);

    if (step.removed.empty()) {
      res.weakly = a_hat;
      for (int i : res.estimated_active)
        if (std::find(a_hat.begin(), a_hat.end(), i) == a_hat.end()) res.strongly.push_back(i);
      return res;
    }
    std::vector<int> next;
    for (int i : a_hat)
      if (std::find(step.removed.begin(), step.removed.end(), i) == step.removed.end())
        next.push_back(i);
    a_hat = std::move(next);
    if (a_hat.empty()) {
      res.strongly = res.estimated_active;
      return res;
    }
  }
  // unreachable: the working set strictly shrinks every pass
  throw IdentificationError(IdentificationError::Kind::lp_failure,
                            "identification loop failed to terminate");
}

InteriorEstimate interior_multiplier(const Problem& p, const Iterate& it,
                                     const std::vector<int>& a_plus, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
  const double width = std::pow(eta(p, it).eta, tau);
  const Vec grad_phi = p.objective.gradient(it.z);

  InteriorEstimate est;
  est.lambda_hat.assign(p.m, 0.0);

  if (a_plus.empty()) {
    for (int r = 0; r < p.n; ++r)
      if (std::fabs(grad_phi[r]) > width)
        throw IdentificationError(
            IdentificationError::Kind::point_too_far,
            "zero multiplier violates the stationarity box: point too far from the solution set");
    return est;
  }

  // variables: t_hat, then one multiplier per strongly active index
  const int k = static_cast<int>(a_plus.size());
  LpProblem lp = LpProblem::sized(1 + k, p.n + k);
  lp.objective[0] = 1.0;
  for (int c = 0; c < k; ++c) {
    const Vec gi = p.constraints[a_plus[c]].gradient(it.z);
    for (int r = 0; r < p.n; ++r) lp.rows(r, 1 + c) = gi[r];
  }
  for (int r = 0; r < p.n; ++r) {
    lp.row_lower[r] = -width - grad_phi[r];
    lp.row_upper[r] = width - grad_phi[r];
  }
  for (int c = 0; c < k; ++c) {
    // t_hat - lambda_i <= 0
    lp.rows(p.n + c, 0) = 1.0;
    lp.rows(p.n + c, 1 + c) = -1.0;
    lp.row_upper[p.n + c] = 0.0;
  }

  const LpSolution sol = solve_or_throw(lp, nullptr, "interior multiplier LP");
  est.t_hat = sol.objective_value;
  for (int c = 0; c < k; ++c) est.lambda_hat[a_plus[c]] = std::max(0.0, sol.point[1 + c]);
  return est;
}

}  // namespace degen
