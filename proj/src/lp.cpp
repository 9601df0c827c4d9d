#include "degen/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degen {

LpProblem LpProblem::sized(int vars, int rows_in) {
  LpProblem lp;
  lp.num_vars = vars;
  lp.objective.assign(vars, 0.0);
  lp.rows = Mat(rows_in, vars);
  lp.row_lower.assign(rows_in, -kInf);
  lp.row_upper.assign(rows_in, kInf);
  lp.var_lower.assign(vars, 0.0);
  lp.var_upper.assign(vars, kInf);
  return lp;
}

void LpProblem::validate() const {
  const int p = num_vars, q = num_rows();
  if (static_cast<int>(objective.size()) != p || rows.cols() != p ||
      static_cast<int>(row_lower.size()) != q || static_cast<int>(row_upper.size()) != q ||
      static_cast<int>(var_lower.size()) != p || static_cast<int>(var_upper.size()) != p)
    throw std::invalid_argument("lp: inconsistent sizes");
  for (int i = 0; i < q; ++i)
    if (!(row_lower[i] <= row_upper[i]))
      throw std::invalid_argument("lp: row_lower > row_upper");
  for (int j = 0; j < p; ++j) {
    if (!std::isfinite(var_lower[j]))
      throw std::invalid_argument("lp: variable lower bounds must be finite");
    if (!(var_lower[j] <= var_upper[j]))
      throw std::invalid_argument("lp: var_lower > var_upper");
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::breakdown: return "breakdown";
  }
  return "?";
}

namespace {

constexpr double kOptTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-12;
constexpr double kRatioTol = 1e-11;
constexpr int kMaxPivots = 50000;

enum VarState : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

// Bounded-variable simplex working state. Variable ids: [0,p) structural,
// [p,p+q) row slacks, [p+q,p+2q) phase-1 artificials.
struct Simplex {
  const LpProblem& lp;
  int p, q, nreal;  // nreal = p + q
  Vec lower, upper;           // per variable, artificials included
  Vec art_sign;               // +-1 column sign per row's artificial, 0 if unused
  std::vector<VarState> state;
  std::vector<int> basic;     // variable id per row
  Vec x;                      // current values, all variables
  int pivots = 0;
  bool art_active = false;

  explicit Simplex(const LpProblem& lp_in) : lp(lp_in) {
    p = lp.num_vars;
    q = lp.num_rows();
    nreal = p + q;
    lower.assign(p + 2 * q, 0.0);
    upper.assign(p + 2 * q, 0.0);
    art_sign.assign(q, 0.0);
    for (int j = 0; j < p; ++j) {
      lower[j] = lp.var_lower[j];
      upper[j] = lp.var_upper[j];
    }
    for (int i = 0; i < q; ++i) {
      lower[p + i] = lp.row_lower[i];
      upper[p + i] = lp.row_upper[i];
      lower[nreal + i] = 0.0;
      upper[nreal + i] = 0.0;  // widened when an artificial is introduced
    }
    state.assign(p + 2 * q, kAtLower);
    x.assign(p + 2 * q, 0.0);
  }

  double col(int var, int row) const {
    if (var < p) return lp.rows(row, var);
    if (var < nreal) return var - p == row ? -1.0 : 0.0;
    return var - nreal == row ? art_sign[var - nreal] : 0.0;
  }

  double rest_value(int var) const { return state[var] == kAtUpper ? upper[var] : lower[var]; }

  Mat basis_matrix() const {
    Mat b(q, q);
    for (int i = 0; i < q; ++i)
      for (int r = 0; r < q; ++r) b(r, i) = col(basic[i], r);
    return b;
  }

  // Recomputes basic values from the rest positions. False on a singular basis.
  bool refresh_values() {
    for (int v = 0; v < p + 2 * q; ++v)
      if (state[v] != kBasic) x[v] = rest_value(v);
    if (q == 0) return true;
    Vec rhs(q, 0.0);
    for (int v = 0; v < p + 2 * q; ++v) {
      if (state[v] == kBasic || x[v] == 0.0) continue;
      for (int r = 0; r < q; ++r) rhs[r] -= col(v, r) * x[v];
    }
    Vec xb;
    if (!lu_solve(basis_matrix(), rhs, xb)) return false;
    for (int i = 0; i < q; ++i) x[basic[i]] = xb[i];
    return true;
  }

  // One simplex phase on the given (maximization) costs.
  // Returns optimal/unbounded/breakdown.
  LpStatus iterate(const Vec& cost) {
    for (; pivots < kMaxPivots; ) {
      if (!refresh_values()) return LpStatus::breakdown;

      // prices y: B' y = cost_B
      Vec y(q, 0.0);
      if (q > 0) {
        Mat bt(q, q);
        const Mat b = basis_matrix();
        for (int r = 0; r < q; ++r)
          for (int c = 0; c < q; ++c) bt(r, c) = b(c, r);
        Vec cb(q);
        for (int i = 0; i < q; ++i) cb[i] = cost[basic[i]];
        if (!lu_solve(bt, cb, y)) return LpStatus::breakdown;
      }

      // Bland: lowest-index improving nonbasic
      int enter = -1;
      int dir = 0;
      for (int v = 0; v < p + 2 * q; ++v) {
        if (state[v] == kBasic) continue;
        if (v >= nreal && art_sign[v - nreal] == 0.0) continue;  // unused artificial slot
        if (upper[v] <= lower[v]) continue;                      // fixed
        double d = cost[v];
        for (int r = 0; r < q; ++r) d -= y[r] * col(v, r);
        if (state[v] == kAtLower && d > kOptTol) {
          enter = v;
          dir = +1;
          break;
        }
        if (state[v] == kAtUpper && d < -kOptTol) {
          enter = v;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      // direction through the basis: u = B^-1 col(enter)
      Vec u(q, 0.0);
      if (q > 0) {
        Vec rhs(q);
        for (int r = 0; r < q; ++r) rhs[r] = col(enter, r);
        if (!lu_solve(basis_matrix(), rhs, u)) return LpStatus::breakdown;
      }

      // ratio test; t is the move of the entering variable off its bound
      double tmin = upper[enter] - lower[enter];  // bound-to-bound flip, may be inf
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < q; ++i) {
        const int b = basic[i];
        const double rate = -dir * u[i];
        double t = kInf;
        bool to_upper = false;
        if (rate > kRatioTol && std::isfinite(upper[b])) {
          t = (upper[b] - x[b]) / rate;
          to_upper = true;
        } else if (rate < -kRatioTol && std::isfinite(lower[b])) {
          t = (x[b] - lower[b]) / (-rate);
        } else {
          continue;
        }
        t = std::max(t, 0.0);
        const double tie = std::isfinite(tmin) ? 1e-15 * (1.0 + std::fabs(tmin)) : 0.0;
        if (t < tmin - tie) {
          tmin = t;
          leave = i;
          leave_to_upper = to_upper;
        } else if (leave >= 0 && std::fabs(t - tmin) <= tie && basic[i] < basic[leave]) {
          leave = i;
          leave_to_upper = to_upper;
        }
      }

      if (!std::isfinite(tmin)) return LpStatus::unbounded;

      if (leave < 0) {
        // bound-to-bound flip
        state[enter] = dir > 0 ? kAtUpper : kAtLower;
        ++pivots;
        continue;
      }

      // basis change; insist on an acceptable pivot element
      if (std::fabs(u[leave]) < kPivotTol) {
        const double tie = 1e-15 * (1.0 + std::fabs(tmin));
        int alt = -1;
        bool alt_to_upper = false;
        for (int i = 0; i < q; ++i) {
          if (i == leave || std::fabs(u[i]) < kPivotTol) continue;
          const int b = basic[i];
          const double rate = -dir * u[i];
          double t = kInf;
          bool to_upper = false;
          if (rate > kRatioTol && std::isfinite(upper[b])) {
            t = (upper[b] - x[b]) / rate;
            to_upper = true;
          } else if (rate < -kRatioTol && std::isfinite(lower[b])) {
            t = (x[b] - lower[b]) / (-rate);
          } else {
            continue;
          }
          if (std::fabs(std::max(t, 0.0) - tmin) <= tie && (alt < 0 || basic[i] < basic[alt])) {
            alt = i;
            alt_to_upper = to_upper;
          }
        }
        if (alt < 0) return LpStatus::breakdown;
        leave = alt;
        leave_to_upper = alt_to_upper;
      }

      state[basic[leave]] = leave_to_upper ? kAtUpper : kAtLower;
      state[enter] = kBasic;
      basic[leave] = enter;
      ++pivots;
    }
    return LpStatus::breakdown;  // pivot cap; not expected at this scale
  }

  double infeasibility() const {
    double s = 0.0;
    for (int i = 0; i < q; ++i)
      if (art_sign[i] != 0.0) s += std::fabs(x[nreal + i]);
    return s;
  }
};

bool warm_basis_valid(const LpProblem& lp, const LpBasis& warm) {
  const int p = lp.num_vars, q = lp.num_rows();
  if (static_cast<int>(warm.basic.size()) != q ||
      static_cast<int>(warm.at_upper.size()) != p + q)
    return false;
  std::vector<bool> seen(p + q, false);
  for (int v : warm.basic) {
    if (v < 0 || v >= p + q || seen[v]) return false;
    seen[v] = true;
  }
  // every nonbasic variable must have a finite bound to rest at
  for (int v = 0; v < p + q; ++v) {
    if (seen[v]) continue;
    const double lo = v < p ? lp.var_lower[v] : lp.row_lower[v - p];
    const double hi = v < p ? lp.var_upper[v] : lp.row_upper[v - p];
    if (warm.at_upper[v] ? !std::isfinite(hi) : !std::isfinite(lo)) return false;
  }
  return true;
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, const LpBasis* warm) {
  lp.validate();
  Simplex s(lp);
  LpSolution sol;

  bool warm_ready = false;
  if (warm != nullptr && !warm->empty() && warm_basis_valid(lp, *warm)) {
    s.basic = warm->basic;
    for (int v = 0; v < s.nreal; ++v)
      s.state[v] = warm->at_upper[v] ? kAtUpper : kAtLower;
    for (int v : s.basic) s.state[v] = kBasic;
    if (s.refresh_values()) {
      warm_ready = true;
      for (int i = 0; i < s.q && warm_ready; ++i) {
        const int b = s.basic[i];
        if (s.x[b] < s.lower[b] - kFeasTol || s.x[b] > s.upper[b] + kFeasTol) warm_ready = false;
      }
    }
  }

  if (!warm_ready) {
    // cold start: structural at lower, slacks basic; clamp violated rows
    // onto their nearest finite bound and cover the gap with an artificial
    for (int j = 0; j < s.p; ++j) s.state[j] = kAtLower;
    s.basic.assign(s.q, 0);
    Vec w(s.q, 0.0);
    for (int i = 0; i < s.q; ++i) {
      double v = 0.0;
      for (int j = 0; j < s.p; ++j) v += lp.rows(i, j) * lp.var_lower[j];
      w[i] = v;
    }
    bool need_phase1 = false;
    for (int i = 0; i < s.q; ++i) {
      const int slack = s.p + i;
      const int art = s.nreal + i;
      if (w[i] < lp.row_lower[i] - kFeasTol) {
        s.state[slack] = kAtLower;
        s.art_sign[i] = +1.0;  // a_i = row_lower - w_i > 0
        s.upper[art] = kInf;
        s.state[art] = kBasic;
        s.basic[i] = art;
        need_phase1 = true;
      } else if (w[i] > lp.row_upper[i] + kFeasTol) {
        s.state[slack] = kAtUpper;
        s.art_sign[i] = -1.0;  // a_i = w_i - row_upper > 0
        s.upper[art] = kInf;
        s.state[art] = kBasic;
        s.basic[i] = art;
        need_phase1 = true;
      } else {
        s.state[slack] = kBasic;
        s.basic[i] = slack;
      }
    }

    if (need_phase1) {
      Vec cost1(s.p + 2 * s.q, 0.0);
      for (int i = 0; i < s.q; ++i)
        if (s.art_sign[i] != 0.0) cost1[s.nreal + i] = -1.0;
      const LpStatus st = s.iterate(cost1);
      if (st == LpStatus::breakdown || st == LpStatus::unbounded) {
        sol.status = LpStatus::breakdown;
        sol.pivots = s.pivots;
        return sol;
      }
      s.refresh_values();
      if (s.infeasibility() > kFeasTol) {
        sol.status = LpStatus::infeasible;
        sol.pivots = s.pivots;
        return sol;
      }
      // freeze artificials at zero for phase 2
      for (int i = 0; i < s.q; ++i)
        if (s.art_sign[i] != 0.0) s.upper[s.nreal + i] = 0.0;
    }
  }

  Vec cost2(s.p + 2 * s.q, 0.0);
  for (int j = 0; j < s.p; ++j) cost2[j] = lp.objective[j];
  const LpStatus st = s.iterate(cost2);
  sol.pivots = s.pivots;
  if (st != LpStatus::optimal) {
    sol.status = st;
    return sol;
  }
  s.refresh_values();

  // feasibility audit of the reported point
  for (int v = 0; v < s.nreal; ++v) {
    if (s.x[v] < s.lower[v] - kFeasTol || s.x[v] > s.upper[v] + kFeasTol) {
      sol.status = LpStatus::breakdown;
      return sol;
    }
  }

  sol.status = LpStatus::optimal;
  sol.point.assign(s.x.begin(), s.x.begin() + s.p);
  sol.objective_value = dot(lp.objective, sol.point);
  sol.basis.basic = s.basic;
  sol.basis.at_upper.assign(s.nreal, 0);
  for (int v = 0; v < s.nreal; ++v) sol.basis.at_upper[v] = s.state[v] == kAtUpper ? 1 : 0;
  return sol;
}

}  // namespace degen
