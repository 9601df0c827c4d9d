#include "degen/subproblem.hpp"

#include <algorithm>
#include <cmath>

#include "degen/lp.hpp"

namespace degen {
namespace {

constexpr double kSeedTau = 0.6;       // working-set seed threshold exponent
constexpr double kActiveTol = 1e-11;   // "constraint holds with equality" slop
constexpr double kStepTol = 1e-13;     // step considered zero below this
constexpr double kMultTol = 1e-11;     // multiplier negativity tolerance
constexpr double kResidualLimit = 1e-9;

// Candidate row linearly independent of the rows already listed?
bool independent_row(const std::vector<Vec>& rows, const Vec& cand) {
  Vec r = cand;
  // orthonormalize the existing rows, then measure the candidate's residual
  std::vector<Vec> ortho;
  for (Vec v : rows) {
    for (const Vec& o : ortho) {
      const double c = dot(v, o);
      for (size_t j = 0; j < v.size(); ++j) v[j] -= c * o[j];
    }
    const double nv = norm2(v);
    if (nv > 1e-12) {
      for (double& x : v) x /= nv;
      ortho.push_back(std::move(v));
    }
  }
  for (const Vec& o : ortho) {
    const double c = dot(r, o);
    for (size_t j = 0; j < r.size(); ++j) r[j] -= c * o[j];
  }
  return norm2(r) > 1e-9 * (1.0 + norm2(cand));
}

struct QpData {
  int n = 0, m = 0;
  Mat h;       // shifted Lagrangian Hessian
  Vec c;       // grad phi
  std::vector<Vec> j;  // constraint gradients
  Vec g;       // constraint values
  Vec lambda;  // incoming multipliers
  double mu = 0.0;
};

// Equality-constrained solve on the working set: KKT saddle system
//   [ H  J_W' ] [dz]   [ -c          ]
//   [ J_W -mu I] [nu] = [ -(g_W + mu lambda_W) ]
// (mu == 0 gives the plain SQP working-set system).
bool solve_eqp(const QpData& d, const std::vector<int>& w, Vec& dz, Vec& nu) {
  const int k = static_cast<int>(w.size());
  Mat kkt(d.n + k, d.n + k);
  Vec rhs(d.n + k, 0.0);
  for (int r = 0; r < d.n; ++r) {
    for (int c2 = 0; c2 < d.n; ++c2) kkt(r, c2) = d.h(r, c2);
    rhs[r] = -d.c[r];
  }
  for (int a = 0; a < k; ++a) {
    const int i = w[a];
    for (int r = 0; r < d.n; ++r) {
      kkt(r, d.n + a) = d.j[i][r];
      kkt(d.n + a, r) = d.j[i][r];
    }
    kkt(d.n + a, d.n + a) = -d.mu;
    rhs[d.n + a] = -(d.g[i] + d.mu * d.lambda[i]);
  }
  Vec sol;
  if (!lu_solve(kkt, rhs, sol)) return false;
  dz.assign(sol.begin(), sol.begin() + d.n);
  nu.assign(sol.begin() + d.n, sol.end());
  return true;
}

struct QpOutcome {
  Vec dz;
  Vec lambda_plus;
  std::vector<int> working_set;
};

// Primal active-set method for the stabilized QP (mu > 0), run in the joint
// (dz, lambda_plus) space. Every working set yields a nonsingular saddle
// system because of the -mu I block.
QpOutcome solve_mu_positive(const QpData& d, const std::vector<int>& seed) {
  const int n = d.n, m = d.m;
  Vec dz(n, 0.0);
  Vec lp(m, 0.0);
  for (int i = 0; i < m; ++i) lp[i] = std::max(0.0, d.lambda[i] + d.g[i] / d.mu);

  auto constraint_value = [&](const Vec& dz_v, const Vec& lp_v, int i) {
    return d.g[i] + dot(d.j[i], dz_v) - d.mu * (lp_v[i] - d.lambda[i]);
  };

  std::vector<int> w;
  for (int i : seed) {
    const double scale = 1.0 + std::fabs(d.g[i]) + d.mu * d.lambda[i];
    if (std::fabs(constraint_value(dz, lp, i)) <= kActiveTol * scale) w.push_back(i);
  }

  const int change_cap = 10 * (n + m);
  int changes = 0;
  for (int iter = 0; iter < 3 * change_cap + 6; ++iter) {
    Vec dz_hat, nu;
    if (!solve_eqp(d, w, dz_hat, nu))
      throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                            "singular working-set system");
    Vec lp_hat(m, 0.0);
    for (size_t a = 0; a < w.size(); ++a) lp_hat[w[a]] = nu[a];

    double step = 0.0;
    for (int r = 0; r < n; ++r) step = std::max(step, std::fabs(dz_hat[r] - dz[r]));
    for (int i = 0; i < m; ++i) step = std::max(step, std::fabs(lp_hat[i] - lp[i]));

    if (step <= kStepTol * (1.0 + norm_inf(dz_hat) + norm_inf(lp_hat))) {
      int drop = -1;
      for (size_t a = 0; a < w.size(); ++a)
        if (nu[a] < -kMultTol && (drop < 0 || w[a] < w[drop])) drop = static_cast<int>(a);
      if (drop < 0) return {dz_hat, lp_hat, w};
      w.erase(w.begin() + drop);
      if (++changes > change_cap)
        throw SubproblemError(SubproblemError::Kind::iteration_limit,
                              "working-set change limit exceeded");
      continue;
    }

    // line step toward the working-set minimizer
    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(w.begin(), w.end(), i) != w.end()) continue;
      const double rate = dot(d.j[i], dz_hat) - dot(d.j[i], dz)  // J_i (dz_hat - dz)
                          - d.mu * (lp_hat[i] - lp[i]);
      if (rate <= kStepTol) continue;
      const double value = constraint_value(dz, lp, i);  // <= 0 at the current point
      const double t = std::max(0.0, -value / rate);
      if (t < alpha - 1e-15) {
        alpha = t;
        blocker = i;
      }
    }
    for (int r = 0; r < n; ++r) dz[r] += alpha * (dz_hat[r] - dz[r]);
    for (int i = 0; i < m; ++i) lp[i] += alpha * (lp_hat[i] - lp[i]);
    if (blocker >= 0) {
      w.push_back(blocker);
      std::sort(w.begin(), w.end());
      if (++changes > change_cap)
        throw SubproblemError(SubproblemError::Kind::iteration_limit,
                              "working-set change limit exceeded");
    }
  }
  throw SubproblemError(SubproblemError::Kind::iteration_limit,
                        "active-set iteration limit exceeded");
}

// Feasible point for the plain SQP linearization via an elastic LP
// (dz split into nonnegative parts, one violation variable).
Vec plain_feasible_point(const QpData& d) {
  bool ok = true;
  for (int i = 0; i < d.m; ++i)
    if (d.g[i] > kActiveTol) ok = false;
  if (ok) return Vec(d.n, 0.0);

  LpProblem lp = LpProblem::sized(2 * d.n + 1, d.m);
  lp.objective[2 * d.n] = -1.0;  // maximize -t
  for (int i = 0; i < d.m; ++i) {
    for (int r = 0; r < d.n; ++r) {
      lp.rows(i, r) = d.j[i][r];
      lp.rows(i, d.n + r) = -d.j[i][r];
    }
    lp.rows(i, 2 * d.n) = -1.0;
    lp.row_upper[i] = -d.g[i];
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal || -sol.objective_value > 1e-9)
    throw SubproblemError(SubproblemError::Kind::infeasible_linearization,
                          "linearized constraints are inconsistent (mu = 0)");
  Vec dz(d.n, 0.0);
  for (int r = 0; r < d.n; ++r) dz[r] = sol.point[r] - sol.point[d.n + r];
  return dz;
}

// Plain SQP (mu == 0): primal active set in dz with a rank-guarded working set.
QpOutcome solve_mu_zero(const QpData& d, const std::vector<int>& seed) {
  const int n = d.n, m = d.m;
  Vec dz = plain_feasible_point(d);

  auto constraint_value = [&](const Vec& dz_v, int i) { return d.g[i] + dot(d.j[i], dz_v); };

  std::vector<int> w;
  std::vector<Vec> w_rows;
  for (int i : seed) {
    if (std::fabs(constraint_value(dz, i)) > kActiveTol * (1.0 + std::fabs(d.g[i]))) continue;
    if (!independent_row(w_rows, d.j[i])) continue;
    w.push_back(i);
    w_rows.push_back(d.j[i]);
  }

  const int change_cap = 10 * (n + m);
  int changes = 0;
  for (int iter = 0; iter < 3 * change_cap + 6; ++iter) {
    Vec dz_hat, nu;
    if (!solve_eqp(d, w, dz_hat, nu))
      throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                            "singular working-set system");

    double step = 0.0;
    for (int r = 0; r < n; ++r) step = std::max(step, std::fabs(dz_hat[r] - dz[r]));

    if (step <= kStepTol * (1.0 + norm_inf(dz_hat))) {
      int drop = -1;
      for (size_t a = 0; a < w.size(); ++a)
        if (nu[a] < -kMultTol && (drop < 0 || w[a] < w[drop])) drop = static_cast<int>(a);
      if (drop < 0) {
        Vec lp_out(m, 0.0);
        for (size_t a = 0; a < w.size(); ++a) lp_out[w[a]] = nu[a];
        return {dz_hat, lp_out, w};
      }
      w_rows.erase(w_rows.begin() + drop);
      w.erase(w.begin() + drop);
      if (++changes > change_cap)
        throw SubproblemError(SubproblemError::Kind::iteration_limit,
                              "working-set change limit exceeded");
      continue;
    }

    double alpha = 1.0;
    int blocker = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(w.begin(), w.end(), i) != w.end()) continue;
      double rate = 0.0;
      for (int r = 0; r < n; ++r) rate += d.j[i][r] * (dz_hat[r] - dz[r]);
      if (rate <= kStepTol) continue;
      const double t = std::max(0.0, -constraint_value(dz, i) / rate);
      if (t < alpha - 1e-15) {
        alpha = t;
        blocker = i;
      }
    }
    for (int r = 0; r < n; ++r) dz[r] += alpha * (dz_hat[r] - dz[r]);
    if (blocker >= 0) {
      if (!independent_row(w_rows, d.j[blocker]))
        throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                              "dependent blocking constraint");
      w.push_back(blocker);
      w_rows.push_back(d.j[blocker]);
      // keep ascending order, rows aligned
      for (size_t a = w.size() - 1; a > 0 && w[a] < w[a - 1]; --a) {
        std::swap(w[a], w[a - 1]);
        std::swap(w_rows[a], w_rows[a - 1]);
      }
      if (++changes > change_cap)
        throw SubproblemError(SubproblemError::Kind::iteration_limit,
                              "working-set change limit exceeded");
    }
  }
  throw SubproblemError(SubproblemError::Kind::iteration_limit,
                        "active-set iteration limit exceeded");
}

}  // namespace

double hessian_shift_for(const Mat& h) {
  static constexpr double kLadder[] = {0.0,  1e-8, 1e-6, 1e-4, 1e-2,
                                       1e0,  1e2,  1e4,  1e6,  1e8};
  for (double s : kLadder) {
    Mat hs = h;
    for (int i = 0; i < h.rows(); ++i) hs(i, i) += s;
    if (is_positive_definite(hs)) return s;
  }
  throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                        "Hessian cannot be regularized to positive definite");
}

SubproblemResult solve_subproblem(const Problem& p, const Iterate& it, double mu) {
  if (mu < 0.0) throw std::invalid_argument("mu must be nonnegative");

  QpData d;
  d.n = p.n;
  d.m = p.m;
  d.mu = mu;
  d.c = p.objective.gradient(it.z);
  d.g = p.constraint_values(it.z);
  d.lambda = it.lambda;
  d.j.resize(p.m);
  for (int i = 0; i < p.m; ++i) d.j[i] = p.constraints[i].gradient(it.z);

  const Mat h0 = hess_lagrangian(p, it);
  const double shift = hessian_shift_for(h0);
  d.h = h0;
  for (int i = 0; i < p.n; ++i) d.h(i, i) += shift;

  // working-set seed: nearly active constraints carrying a multiplier
  const double seed_width = std::pow(eta(p, it).eta, kSeedTau);
  std::vector<int> seed;
  for (int i = 0; i < p.m; ++i)
    if (d.g[i] >= -seed_width && it.lambda[i] > 0.0) seed.push_back(i);

  QpOutcome out = mu > 0.0 ? solve_mu_positive(d, seed) : solve_mu_zero(d, seed);

  SubproblemResult res;
  res.dz = std::move(out.dz);
  res.lambda_plus = std::move(out.lambda_plus);
  res.working_set = std::move(out.working_set);
  res.hessian_shift = shift;
  for (double& l : res.lambda_plus) {
    if (l < 0.0 && l >= -1e-10) l = 0.0;
    if (l < 0.0)
      throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                            "negative multiplier from subproblem");
  }
  res.kkt_residual = subproblem_residual(p, it, mu, res);
  if (!(res.kkt_residual <= kResidualLimit))
    throw SubproblemError(SubproblemError::Kind::numerical_breakdown,
                          "subproblem residual above 1e-9");
  return res;
}

double subproblem_residual(const Problem& p, const Iterate& it, double mu,
                           const SubproblemResult& r) {
  if (static_cast<int>(r.dz.size()) != p.n || static_cast<int>(r.lambda_plus.size()) != p.m)
    throw std::invalid_argument("subproblem result dimensions do not match problem");
  Mat h = hess_lagrangian(p, it);
  for (int i = 0; i < p.n; ++i) h(i, i) += r.hessian_shift;

  Vec stat = matvec(h, r.dz);
  const Vec grad_phi = p.objective.gradient(it.z);
  for (int j = 0; j < p.n; ++j) stat[j] += grad_phi[j];
  double ss = 0.0;
  for (int i = 0; i < p.m; ++i) {
    const Vec gi = p.constraints[i].gradient(it.z);
    for (int j = 0; j < p.n; ++j) stat[j] += r.lambda_plus[i] * gi[j];
  }
  for (double v : stat) ss += v * v;
  for (int i = 0; i < p.m; ++i) {
    const double lin = p.constraints[i].eval(it.z) + dot(p.constraints[i].gradient(it.z), r.dz) -
                       mu * (r.lambda_plus[i] - it.lambda[i]);
    const double comp = std::min(r.lambda_plus[i], -lin);
    ss += comp * comp;
  }
  return std::sqrt(ss);
}

}  // namespace degen
