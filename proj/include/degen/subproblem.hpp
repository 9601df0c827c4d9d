#pragma once

#include <stdexcept>
#include <vector>

#include "degen/problem.hpp"

namespace degen {

/// Step and multipliers computed from one stabilized SQP subproblem.
struct SubproblemResult {
  Vec dz;
  Vec lambda_plus;                // componentwise >= 0
  std::vector<int> working_set;   // constraints active in the subproblem
  double kkt_residual = 0.0;      // <= 1e-9 on success
  double hessian_shift = 0.0;     // diagonal regularization actually applied
};

class SubproblemError : public std::runtime_error {
 public:
  enum class Kind { infeasible_linearization, iteration_limit, numerical_breakdown };
  SubproblemError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Smallest value in {0, 1e-8, 1e-6, ...} whose diagonal shift makes h
/// positive definite (probed by Cholesky). Throws when the ladder runs out.
double hessian_shift_for(const Mat& h);

/// Solves the stabilized subproblem at (z, lambda) with parameter mu >= 0;
/// mu == 0 is the plain SQP subproblem. The returned pair satisfies the
/// mixed complementarity system
///
///   H dz + grad phi(z) + grad g(z) lambda_plus = 0,
///   0 <= lambda_plus  perp  -(g(z) + grad g(z)' dz - mu (lambda_plus - lambda)) >= 0,
///
/// with H the shifted Lagrangian Hessian. Solved by a primal active-set
/// method on the equivalent QP; deterministic lowest-index tie-breaking.
///
/// Throws SubproblemError: infeasible_linearization (mu == 0 with
/// inconsistent linearized constraints), iteration_limit (more than
/// 10 (n + m) working-set changes), numerical_breakdown.
SubproblemResult solve_subproblem(const Problem& p, const Iterate& it, double mu);

/// Euclidean norm of the residual of the system above for a candidate
/// result; independent re-evaluation used by callers to audit solves.
double subproblem_residual(const Problem& p, const Iterate& it, double mu,
                           const SubproblemResult& r);

}  // namespace degen
