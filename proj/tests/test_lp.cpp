#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "degen/active_id.hpp"
#include "degen/lp.hpp"
#include "degen/problems.hpp"
#include "oracles.hpp"

using namespace degen;
using degen::testing::lp_vertex_oracle;
using degen::testing::random_boxed_lp;

TEST_CASE("lp: one-variable examples") {
  LpProblem lp = LpProblem::sized(1, 1);
  lp.objective[0] = 1.0;
  lp.rows(0, 0) = 1.0;
  lp.row_upper[0] = 1.0;
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.point[0] == doctest::Approx(1.0));
  CHECK(sol.objective_value == doctest::Approx(1.0));

  // x <= -1 with x >= 0 is empty
  LpProblem inf = LpProblem::sized(1, 1);
  inf.objective[0] = 1.0;
  inf.rows(0, 0) = 1.0;
  inf.row_upper[0] = -1.0;
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  // crossed row bounds are a construction error
  LpProblem crossed = LpProblem::sized(1, 1);
  crossed.row_lower[0] = 1.0;
  crossed.row_upper[0] = -1.0;
  CHECK_THROWS_AS(solve_lp(crossed), std::invalid_argument);

  // maximize x with no upper bound anywhere
  LpProblem unb = LpProblem::sized(1, 0);
  unb.objective[0] = 1.0;
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("lp: worked identification subproblem value") {
  // first classification LP of the degen-full worked trace: eta = sqrt(6.82e-4),
  // tau = 0.5; optimum is (1.01 + eta^.5)/2 + (0.01 + eta^.5)
  const Problem p3 = get_problem("degen-full");
  const Iterate it({-0.01, -0.01}, {0.5, 0.25, 0.001});
  const LpProblem lp = build_estimation_lp(p3, it, {0, 1, 2}, {1, 2}, 0.5);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  const double width = std::sqrt(std::sqrt(6.82e-4));
  const double expected = (1.01 + width) / 2.0 + (0.01 + width);
  CHECK(sol.objective_value == doctest::Approx(expected).epsilon(1e-10));
  CHECK(sol.objective_value == doctest::Approx(0.757402643).epsilon(1e-6));
  CHECK(sol.point[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(sol.point[1] == doctest::Approx((1.01 + width) / 2.0));
  CHECK(sol.point[2] == doctest::Approx(0.01 + width));
}

TEST_CASE("lp: fixed rows and zero-variable instances") {
  LpProblem fixed = LpProblem::sized(2, 1);
  fixed.objective = {1.0, 1.0};
  fixed.rows(0, 0) = 1.0;
  fixed.rows(0, 1) = 1.0;
  fixed.row_lower[0] = 1.0;
  fixed.row_upper[0] = 1.0;
  fixed.var_upper = {2.0, 2.0};
  const LpSolution s = solve_lp(fixed);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective_value == doctest::Approx(1.0));

  // no variables: rows are constants, feasibility is containment of zero
  LpProblem empty_ok = LpProblem::sized(0, 1);
  empty_ok.row_lower[0] = -1.0;
  empty_ok.row_upper[0] = 1.0;
  const LpSolution e = solve_lp(empty_ok);
  REQUIRE(e.status == LpStatus::optimal);
  CHECK(e.objective_value == 0.0);

  LpProblem empty_bad = LpProblem::sized(0, 1);
  empty_bad.row_lower[0] = 0.5;
  empty_bad.row_upper[0] = 1.0;
  CHECK(solve_lp(empty_bad).status == LpStatus::infeasible);
}

TEST_CASE("lp: oracle equivalence on random boxed instances") {
  Rng rng(42);
  int optimal_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const LpProblem lp = random_boxed_lp(rng);
    const LpSolution sol = solve_lp(lp);
    const auto oracle = lp_vertex_oracle(lp);
    if (oracle.feasible) {
      REQUIRE(sol.status == LpStatus::optimal);
      CHECK(sol.objective_value == doctest::Approx(oracle.objective).epsilon(1e-7).scale(1.0));
      ++optimal_count;
    } else {
      CHECK(sol.status == LpStatus::infeasible);
    }
  }
  CHECK(optimal_count > 30);  // the generator should produce plenty of feasible cases
}

TEST_CASE("lp: pivot counts stay inside the generous Bland bound") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const LpProblem lp = random_boxed_lp(rng);
    const LpSolution sol = solve_lp(lp);
    const int p = lp.num_vars, q = lp.num_rows();
    CHECK(sol.pivots <= (1 << (p + q)) * 4 + 64);
  }
}

TEST_CASE("lp: warm start after an objective-only change") {
  // regression corpus: the two-pass classification sequence on degen-full
  const Problem p3 = get_problem("degen-full");
  const Iterate it({-0.01, -0.01}, {0.5, 0.25, 0.001});
  LpProblem lp1 = build_estimation_lp(p3, it, {0, 1, 2}, {1, 2}, 0.5);
  const LpSolution cold1 = solve_lp(lp1);
  REQUIRE(cold1.status == LpStatus::optimal);

  LpProblem lp2 = lp1;
  lp2.objective = {0.0, 0.0, 1.0};  // second pass objective
  const LpSolution cold2 = solve_lp(lp2);
  const LpSolution warm2 = solve_lp(lp2, &cold1.basis);
  REQUIRE(cold2.status == LpStatus::optimal);
  REQUIRE(warm2.status == LpStatus::optimal);
  CHECK(warm2.objective_value == doctest::Approx(cold2.objective_value).epsilon(1e-9));
  CHECK(warm2.pivots <= cold2.pivots);

  // random cost changes on feasible random instances
  Rng rng(44);
  int checked = 0;
  while (checked < 40) {
    LpProblem lp = random_boxed_lp(rng);
    const LpSolution first = solve_lp(lp);
    if (first.status != LpStatus::optimal) continue;
    ++checked;
    for (double& c : lp.objective) c = rng.uniform(-2.0, 2.0);
    const LpSolution cold = solve_lp(lp);
    const LpSolution warm = solve_lp(lp, &first.basis);
    REQUIRE(cold.status == LpStatus::optimal);
    REQUIRE(warm.status == LpStatus::optimal);
    CHECK(warm.objective_value == doctest::Approx(cold.objective_value).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("lp: deterministic resolves") {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const LpProblem lp = random_boxed_lp(rng);
    const LpSolution a = solve_lp(lp);
    const LpSolution b = solve_lp(lp);
    CHECK(a.status == b.status);
    CHECK(a.pivots == b.pivots);
    if (a.status == LpStatus::optimal) {
      CHECK(a.objective_value == b.objective_value);
      CHECK(a.point == b.point);
    }
  }
}
