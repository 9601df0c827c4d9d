#pragma once

#include <stdexcept>
#include <vector>

#include "degen/lp.hpp"
#include "degen/problem.hpp"

namespace degen {

/// Identification thresholds; requires 0 < tau_hat < tau < 1.
struct IdParams {
  double tau = 0.6;
  double tau_hat = 0.3;
  void validate() const;
};

/// One pass of the identification loop: the working set it solved over, the
/// LP objective it reached, and the indices it removed.
struct IdLoopStep {
  std::vector<int> working_set;
  double lp_objective = 0.0;
  std::vector<int> removed;
};

/// Split of the estimated active set into strongly / weakly active indices.
struct ActiveSetResult {
  std::vector<int> estimated_active;  // A(z, lambda)
  std::vector<int> strongly;          // A+
  std::vector<int> weakly;            // A0
  std::vector<IdLoopStep> loop_trace;
};

/// Raised when identification cannot proceed at the given point: the
/// estimation LP is infeasible (the point is too far from the solution for
/// the residual-scaled bounds to admit any multiplier), its feasible set is
/// unbounded (an MFCQ-like failure at this point), or the LP solver broke
/// down numerically.
class IdentificationError : public std::runtime_error {
 public:
  enum class Kind { point_too_far, unbounded_multipliers, lp_failure };
  IdentificationError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Estimated active set { i : g_i(z) >= -eta(z,lambda)^tau }, ascending.
std::vector<int> estimate_active(const Problem& p, const Iterate& it, double tau);

/// Multiplier-estimation LP over the active estimate: one variable per index
/// in `active`, unit objective on `a_hat`, each stationarity component a
/// two-sided row with half-width eta^tau (constant gradient terms folded
/// into the row bounds).
LpProblem build_estimation_lp(const Problem& p, const Iterate& it, const std::vector<int>& active,
                         const std::vector<int>& a_hat, double tau);

/// Iterative LP-based split of the active estimate into strongly and weakly
/// active indices. Successive solves reuse the previous basis (only the
/// objective changes between passes).
ActiveSetResult classify_active_set(const Problem& p, const Iterate& it, const IdParams& params);

/// Interior multiplier estimate and its attained min-component value.
struct InteriorEstimate {
  double t_hat = 0.0;
  Vec lambda_hat;  // full length m, zero off the strongly active set
};

/// Maximizes the smallest multiplier over the strongly active set subject to
/// the residual-scaled stationarity box. With an empty strongly active set
/// the estimate is the zero multiplier, valid only while the bare gradient
/// satisfies the box.
InteriorEstimate interior_multiplier(const Problem& p, const Iterate& it,
                                     const std::vector<int>& a_plus, double tau);

}  // namespace degen
