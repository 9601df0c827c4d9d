#pragma once

#include <limits>
#include <vector>

#include "degen/linalg.hpp"

namespace degen {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense LP with two-sided rows and box-bounded variables:
///
///   maximize objective' x
///   subject to row_lower <= rows x <= row_upper,
///              var_lower <= x <= var_upper.
///
/// Variable lower bounds are finite (default 0); variable upper bounds and
/// either row bound may be infinite.
struct LpProblem {
  int num_vars = 0;
  Vec objective;
  Mat rows;  // q x num_vars
  Vec row_lower, row_upper;
  Vec var_lower, var_upper;

  int num_rows() const { return rows.rows(); }

  /// Sized problem with zero objective/rows, variables in [0, inf).
  static LpProblem sized(int vars, int rows);

  /// Throws std::invalid_argument on inconsistent sizes or crossed bounds.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, breakdown };
const char* to_string(LpStatus s);

/// Basic/nonbasic partition usable to warm-start a later solve on a problem
/// with the same shape. Opaque to callers.
struct LpBasis {
  std::vector<int> basic;               // one variable id per row
  std::vector<unsigned char> at_upper;  // rest position per variable (structural + slack)
  bool empty() const { return basic.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::breakdown;
  Vec point;  // structural values when optimal
  double objective_value = 0.0;
  LpBasis basis;
  int pivots = 0;  // simplex pivots over both phases
};

/// Primal simplex on the bounded-variable form, Bland's rule throughout.
/// A warm basis is used when it is structurally valid and primal feasible
/// (the intended case: re-solves after an objective-only change); otherwise
/// the solve falls back to a cold start.
LpSolution solve_lp(const LpProblem& lp, const LpBasis* warm = nullptr);

}  // namespace degen
