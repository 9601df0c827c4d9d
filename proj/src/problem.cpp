#include "degen/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace degen {

void Problem::validate() const {
  if (n < 1) throw std::invalid_argument("problem dimension n must be >= 1");
  if (m < 0) throw std::invalid_argument("constraint count m must be >= 0");
  if (objective.dimension() != n)
    throw std::invalid_argument("objective dimension does not match n");
  if (static_cast<int>(constraints.size()) != m)
    throw std::invalid_argument("constraint list length does not match m");
  for (int i = 0; i < m; ++i)
    if (constraints[i].dimension() != n)
      throw std::invalid_argument("constraint " + std::to_string(i + 1) +
                                  " dimension does not match n");
  if (!metadata) return;

  const GroundTruth& gt = *metadata;
  if (static_cast<int>(gt.z_star.size()) != n)
    throw std::invalid_argument("metadata zstar length does not match n");
  if (gt.slam_vertices.empty())
    throw std::invalid_argument("metadata requires at least one slam_vertex");
  for (const Vec& v : gt.slam_vertices) {
    if (static_cast<int>(v.size()) != m)
      throw std::invalid_argument("slam_vertex length does not match m");
    for (double x : v)
      if (x < 0.0) throw std::invalid_argument("slam_vertex has a negative component");
  }
  const std::vector<int> active = active_set_at_solution();
  for (int i : gt.b_plus)
    if (std::find(active.begin(), active.end(), i) == active.end())
      throw std::invalid_argument("bplus index " + std::to_string(i + 1) +
                                  " is not active at zstar");
  for (int i : gt.b_zero)
    if (std::find(gt.b_plus.begin(), gt.b_plus.end(), i) != gt.b_plus.end())
      throw std::invalid_argument("bplus and bzero overlap");
  if (gt.b_plus.size() + gt.b_zero.size() != active.size())
    throw std::invalid_argument("bplus and bzero do not partition the active set");
  if (gt.mfcq_certificate) {
    if (static_cast<int>(gt.mfcq_certificate->size()) != n)
      throw std::invalid_argument("mfcq certificate length does not match n");
    for (int i : active) {
      const Vec gi = constraints[i].gradient(gt.z_star);
      if (!(dot(gi, *gt.mfcq_certificate) < 0.0))
        throw std::invalid_argument("mfcq certificate is not strictly decreasing for constraint " +
                                    std::to_string(i + 1));
    }
  }
}

Vec Problem::constraint_values(const Vec& z) const {
  Vec g(m, 0.0);
  for (int i = 0; i < m; ++i) g[i] = constraints[i].eval(z);
  return g;
}

std::vector<int> Problem::active_set_at_solution(double tol) const {
  if (!metadata) throw std::invalid_argument("problem has no ground-truth metadata");
  std::vector<int> active;
  for (int i = 0; i < m; ++i)
    if (std::fabs(constraints[i].eval(metadata->z_star)) <= tol) active.push_back(i);
  return active;
}

Iterate::Iterate(Vec z_in, Vec lambda_in) : z(std::move(z_in)), lambda(std::move(lambda_in)) {
  for (double l : lambda)
    if (l < 0.0) throw std::invalid_argument("iterate multipliers must be nonnegative");
}

EtaReport eta(const Problem& p, const Iterate& it) {
  if (static_cast<int>(it.z.size()) != p.n || static_cast<int>(it.lambda.size()) != p.m)
    throw std::invalid_argument("iterate dimensions do not match problem");
  EtaReport r;
  r.stationarity = p.objective.gradient(it.z);
  for (int i = 0; i < p.m; ++i) {
    const Vec gi = p.constraints[i].gradient(it.z);
    for (int j = 0; j < p.n; ++j) r.stationarity[j] += it.lambda[i] * gi[j];
  }
  r.complementarity.resize(p.m);
  for (int i = 0; i < p.m; ++i)
    r.complementarity[i] = std::min(it.lambda[i], -p.constraints[i].eval(it.z));
  double ss = 0.0;
  for (double v : r.stationarity) ss += v * v;
  for (double v : r.complementarity) ss += v * v;
  r.eta = std::sqrt(ss);
  return r;
}

Mat hess_lagrangian(const Problem& p, const Iterate& it) {
  if (static_cast<int>(it.z.size()) != p.n || static_cast<int>(it.lambda.size()) != p.m)
    throw std::invalid_argument("iterate dimensions do not match problem");
  Mat h = p.objective.hessian(it.z);
  for (int i = 0; i < p.m; ++i) {
    const Mat hi = p.constraints[i].hessian(it.z);
    for (int r = 0; r < p.n; ++r)
      for (int c = 0; c < p.n; ++c) h(r, c) += it.lambda[i] * hi(r, c);
  }
  return h;
}

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(a)); }

void check_function(const PolyFunction& f, const Vec& z, double h, DerivativeReport& rep) {
  const int n = f.dimension();
  const Vec grad = f.gradient(z);
  const Mat hess = f.hessian(z);
  Vec zp = z, zm = z;
  for (int j = 0; j < n; ++j) {
    zp[j] = z[j] + h;
    zm[j] = z[j] - h;
    const double fd = (f.eval(zp) - f.eval(zm)) / (2.0 * h);
    rep.max_gradient_error = std::max(rep.max_gradient_error, rel_err(grad[j], fd));
    const Vec gp = f.gradient(zp);
    const Vec gm = f.gradient(zm);
    for (int i = 0; i < n; ++i) {
      const double fd2 = (gp[i] - gm[i]) / (2.0 * h);
      rep.max_hessian_error = std::max(rep.max_hessian_error, rel_err(hess(i, j), fd2));
    }
    zp[j] = z[j];
    zm[j] = z[j];
  }
}

}  // namespace

DerivativeReport check_derivatives(const Problem& p, const Vec& z, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (static_cast<int>(z.size()) != p.n)
    throw std::invalid_argument("point dimension does not match problem");
  DerivativeReport rep;
  check_function(p.objective, z, step, rep);
  for (const auto& g : p.constraints) check_function(g, z, step, rep);
  return rep;
}

}  // namespace degen
