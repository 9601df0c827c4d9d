#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degen/linalg.hpp"
#include "degen/poly.hpp"

namespace degen {

/// Analytic solution data attached to a test problem.
///
/// slam_vertices lists the vertices whose convex hull is the optimal
/// multiplier set; b_plus / b_zero split the active set at z_star into
/// strongly and weakly active indices (0-based internally).
struct GroundTruth {
  Vec z_star;
  std::vector<Vec> slam_vertices;
  std::vector<int> b_plus;
  std::vector<int> b_zero;
  std::optional<Vec> mfcq_certificate;

  bool operator==(const GroundTruth&) const = default;
};

/// Inequality-constrained nonlinear program min phi(z) s.t. g(z) <= 0 with
/// polynomial data.
struct Problem {
  std::string name;
  int n = 0;
  int m = 0;
  PolyFunction objective;
  std::vector<PolyFunction> constraints;
  std::optional<GroundTruth> metadata;

  /// Throws std::invalid_argument on any dimension inconsistency or broken
  /// metadata invariant.
  void validate() const;

  /// Constraint values g(z), length m.
  Vec constraint_values(const Vec& z) const;

  /// Indices with |g_i(z_star)| <= tol (requires metadata).
  std::vector<int> active_set_at_solution(double tol = 1e-9) const;

  bool operator==(const Problem&) const = default;
};

/// Primal-dual pair with componentwise nonnegative multipliers; the
/// constructor enforces lambda >= 0.
struct Iterate {
  Vec z;
  Vec lambda;

  Iterate() = default;
  Iterate(Vec z_in, Vec lambda_in);
};

/// Decomposed KKT residual: eta is the Euclidean norm of the concatenated
/// stationarity and complementarity vectors, so eta == 0 exactly when both
/// parts vanish.
struct EtaReport {
  Vec stationarity;     // grad phi + sum_i lambda_i grad g_i
  Vec complementarity;  // componentwise min(lambda_i, -g_i)
  double eta = 0.0;
};

EtaReport eta(const Problem& p, const Iterate& it);

/// Hessian of the Lagrangian, exactly symmetric.
Mat hess_lagrangian(const Problem& p, const Iterate& it);

/// Worst relative errors of the analytic derivatives against central finite
/// differences (gradients from function values, Hessians from analytic
/// gradients). Errors are scaled by max(1, |value|).
struct DerivativeReport {
  double max_gradient_error = 0.0;
  double max_hessian_error = 0.0;
  double max_error() const { return std::max(max_gradient_error, max_hessian_error); }
};

DerivativeReport check_derivatives(const Problem& p, const Vec& z, double step);

}  // namespace degen
