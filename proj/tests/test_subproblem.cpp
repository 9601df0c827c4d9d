#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "degen/problems.hpp"
#include "degen/subproblem.hpp"
#include "oracles.hpp"

using namespace degen;
using degen::testing::qp_lattice_oracle;
using degen::testing::random_qp;

namespace {

Problem inconsistent_linearization() {
  // g1 = z + 1 <= 0 and g2 = -z <= 0 linearize to dz <= -1 and dz >= 0 at z = 0
  Problem p;
  p.name = "inconsistent";
  p.n = 1;
  p.m = 2;
  p.objective = PolyFunction(1, {{1.0, {2}}});
  p.constraints = {PolyFunction(1, {{1.0, {1}}, {1.0, {0}}}), PolyFunction(1, {{-1.0, {1}}})};
  return p;
}

}  // namespace

TEST_CASE("solve_subproblem: weak1 stabilized hand example") {
  const Problem p1 = get_problem("weak1");
  const SubproblemResult r = solve_subproblem(p1, Iterate({0.1}, {0.05}), 0.1);
  // active case: 2 dz + 0.2 + lp = 0 and 0.105 + dz - 0.1 lp = 0
  CHECK(r.dz[0] == doctest::Approx(-0.125 / 1.2).epsilon(1e-12));
  CHECK(r.lambda_plus[0] == doctest::Approx(0.01 / 1.2).epsilon(1e-12));
  CHECK(r.dz[0] == doctest::Approx(-0.104167).epsilon(1e-5));
  CHECK(r.lambda_plus[0] == doctest::Approx(0.008333).epsilon(1e-4));
  CHECK(r.working_set == std::vector<int>{0});
  CHECK(r.hessian_shift == 0.0);
  CHECK(r.kkt_residual <= 1e-12);
}

TEST_CASE("solve_subproblem: zero step at exact KKT pairs") {
  for (const auto& name : problem_names()) {
    const Problem p = get_problem(name);
    for (const Vec& v : p.metadata->slam_vertices) {
      const Iterate exact(p.metadata->z_star, v);
      for (double mu : {0.0, 0.1, 0.5}) {
        const SubproblemResult r = solve_subproblem(p, exact, mu);
        CHECK(norm_inf(r.dz) <= 1e-12);
        for (int i = 0; i < p.m; ++i)
          CHECK(r.lambda_plus[i] == doctest::Approx(v[i]).epsilon(1e-10).scale(1.0));
        CHECK(subproblem_residual(p, exact, mu, r) <= 1e-12);
      }
    }
  }
}

TEST_CASE("solve_subproblem: plain SQP lands weak1 on the solution") {
  const Problem p1 = get_problem("weak1");
  const SubproblemResult r = solve_subproblem(p1, Iterate({0.1}, {0.0}), 0.0);
  CHECK(r.dz[0] == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(r.lambda_plus[0] == 0.0);
}

TEST_CASE("solve_subproblem: textbook SQP step on nondeg") {
  const Problem p4 = get_problem("nondeg");
  const SubproblemResult r = solve_subproblem(p4, Iterate({0.6, 0.6}, {1.0}), 0.0);
  CHECK(r.dz[0] == doctest::Approx(-0.1).epsilon(1e-13));
  CHECK(r.dz[1] == doctest::Approx(-0.1).epsilon(1e-13));
  CHECK(r.lambda_plus[0] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("subproblem_residual: perturbations break stationarity") {
  const Problem p1 = get_problem("weak1");
  const Iterate it({0.1}, {0.05});
  SubproblemResult r = solve_subproblem(p1, it, 0.1);
  CHECK(subproblem_residual(p1, it, 0.1, r) <= 1e-12);
  r.dz[0] += 0.01;
  CHECK(subproblem_residual(p1, it, 0.1, r) > 1e-3);

  // zero step at an exact solution has zero residual
  SubproblemResult zero;
  zero.dz = {0.0};
  zero.lambda_plus = {0.0};
  CHECK(subproblem_residual(p1, Iterate({0.0}, {0.0}), 0.2, zero) == 0.0);
}

TEST_CASE("solve_subproblem: infeasible linearization is a distinct error") {
  const Problem p = inconsistent_linearization();
  const Iterate it({0.0}, {0.0, 0.0});
  try {
    solve_subproblem(p, it, 0.0);
    FAIL("expected SubproblemError");
  } catch (const SubproblemError& e) {
    CHECK(e.kind() == SubproblemError::Kind::infeasible_linearization);
  }
  // with stabilization the same subproblem is solvable
  const SubproblemResult r = solve_subproblem(p, it, 0.5);
  CHECK(r.kkt_residual <= 1e-9);
}

TEST_CASE("hessian_shift_for: decade ladder") {
  CHECK(hessian_shift_for(Mat::identity(2)) == 0.0);

  Mat indefinite(2, 2);
  indefinite(0, 0) = -2.0;
  indefinite(1, 1) = 2.0;
  CHECK(hessian_shift_for(indefinite) == 100.0);  // -2 + 1 < 0, -2 + 100 > 0

  Mat barely(2, 2);
  barely(0, 0) = -1e-7;
  barely(1, 1) = 2.0;
  CHECK(hessian_shift_for(barely) == 1e-6);

  CHECK(hessian_shift_for(Mat(2, 2)) == 1e-8);
}

TEST_CASE("solve_subproblem: records the applied shift") {
  const Problem p5 = get_problem("parab");
  // L_zz = diag(2 - 2 lambda, 2): indefinite at lambda = 2
  const SubproblemResult r = solve_subproblem(p5, Iterate({0.7, 0.49}, {2.0}), 0.3);
  CHECK(r.hessian_shift == 100.0);
  CHECK(r.kkt_residual <= 1e-9);
}

TEST_CASE("solve_subproblem matches the working-set lattice oracle") {
  Rng rng(606);
  int found = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto qp = random_qp(rng);
    const auto oracle = qp_lattice_oracle(qp.h, qp.c, qp.j, qp.g, qp.lambda, qp.mu);
    REQUIRE(oracle.found);  // strictly convex: the solution exists
    ++found;

    // feed the same data through a synthetic problem: quadratic objective
    // 0.5 z'Hz + c'z and linear constraints matching (j, g) at z = 0
    const int n = qp.h.rows();
    const int m = static_cast<int>(qp.g.size());
    Problem p;
    p.name = "synthetic";
    p.n = n;
    p.m = m;
    PolyFunction obj(n);
    for (int r = 0; r < n; ++r) {
      std::vector<int> lin(n, 0);
      lin[r] = 1;
      obj.add_term(qp.c[r], lin);
      for (int c2 = 0; c2 < n; ++c2) {
        std::vector<int> quad(n, 0);
        quad[r] += 1;
        quad[c2] += 1;
        obj.add_term(0.5 * qp.h(r, c2), quad);
      }
    }
    p.objective = obj;
    for (int i = 0; i < m; ++i) {
      PolyFunction gi(n);
      gi.add_term(qp.g[i], std::vector<int>(n, 0));
      for (int r = 0; r < n; ++r) {
        std::vector<int> lin(n, 0);
        lin[r] = 1;
        gi.add_term(qp.j[i][r], lin);
      }
      p.constraints.push_back(gi);
    }

    const Iterate it(Vec(n, 0.0), qp.lambda);
    const SubproblemResult r = solve_subproblem(p, it, qp.mu);
    CHECK(r.hessian_shift == 0.0);
    for (int k = 0; k < n; ++k)
      CHECK(r.dz[k] == doctest::Approx(oracle.dz[k]).epsilon(1e-9).scale(1.0));
    for (int i = 0; i < m; ++i)
      CHECK(r.lambda_plus[i] ==
            doctest::Approx(oracle.lambda_plus[i]).epsilon(1e-9).scale(1.0));

    // componentwise complementarity of the returned pair
    for (int i = 0; i < m; ++i) {
      const double lin = qp.g[i] + dot(qp.j[i], r.dz) - qp.mu * (r.lambda_plus[i] - qp.lambda[i]);
      CHECK(std::fabs(std::min(r.lambda_plus[i], -lin)) <= 1e-9);
    }
  }
  CHECK(found == 40);
}
