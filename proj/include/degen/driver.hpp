#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degen/active_id.hpp"
#include "degen/problem.hpp"
#include "degen/subproblem.hpp"

namespace degen {

enum class Algorithm { ssqpa, ssqp, sqp };
const char* to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

struct SolverConfig {
  Algorithm algorithm = Algorithm::ssqpa;
  double sigma = 0.5;
  double tau = 0.6;
  double tau_hat = 0.3;
  double tol = 1e-10;
  int max_iter = 50;
  void validate() const;
};

enum class SolveStatus { converged, max_iter, subproblem_failure, identification_failure };
const char* to_string(SolveStatus s);

/// One trace row; the state of iterate k on arrival. `adjusted` is set when
/// the multiplier-adjustment branch fired while producing this iterate;
/// `hessian_shift` is the regularization used by the accepted solve that
/// produced it (0 for the starting row).
struct IterRecord {
  int k = 0;
  double eta = 0.0;
  std::optional<double> delta;
  double mu = 0.0;
  int n_aplus = 0;
  int n_a0 = 0;
  bool adjusted = false;
  double hessian_shift = 0.0;
};

/// Audit data for every subproblem solve, accepted or not.
struct SubproblemAudit {
  int k = 0;
  double kkt_residual = 0.0;
  double max_complementarity = 0.0;  // largest |min(lambda_plus_i, slack_i)|
  double hessian_shift = 0.0;
  bool accepted = false;
};

struct SolveTrace {
  std::vector<IterRecord> iterations;
  std::vector<Iterate> iterates;  // aligned with iterations
  std::vector<SubproblemAudit> subproblem_solves;
  SolveStatus status = SolveStatus::max_iter;
  Vec q_ratios;
  std::string failure_message;
};

/// Stabilized SQP with identification-based multiplier adjustment: initial
/// classification replaces the starting multiplier by the interior estimate,
/// then each step is accepted only while eta contracts superlinearly; a
/// rejected step triggers re-identification at the current iterate (at most
/// 3 consecutive times).
SolveTrace run_ssqpa(const Problem& p, const Iterate& start, const SolverConfig& cfg);

/// Baselines: plain stabilized SQP (mu = eta^sigma, every step accepted, no
/// identification) and plain SQP (mu = 0 throughout).
SolveTrace run_baseline(const Problem& p, const Iterate& start, const SolverConfig& cfg);

/// Ratios log delta_{k+1} / log delta_k over consecutive rows whose recorded
/// distance (eta when ground truth is absent) lies in (1e-13, 1). Throws
/// std::invalid_argument when fewer than 3 rows are above the floor.
Vec q_order_ratios(const SolveTrace& trace);

}  // namespace degen
