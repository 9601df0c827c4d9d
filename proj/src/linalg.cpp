#include "degen/linalg.hpp"

#include <algorithm>

namespace degen {

bool lu_solve(Mat a, Vec b, Vec& x, double tol) {
  const int n = a.rows();
  assert(a.cols() == n && static_cast<int>(b.size()) == n);
  double scale = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) scale = std::max(scale, std::fabs(a(r, c)));
  if (scale == 0.0) scale = 1.0;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::fabs(a(r, k)) > std::fabs(a(piv, k))) piv = r;
    if (std::fabs(a(piv, k)) < tol * scale) return false;
    if (piv != k) {
      for (int c = k; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(b[k], b[piv]);
    }
    for (int r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      if (f == 0.0) continue;
      a(r, k) = 0.0;
      for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
      b[r] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return true;
}

bool is_positive_definite(const Mat& a, double tol) {
  const int n = a.rows();
  assert(a.cols() == n);
  double dmax = 1.0;
  for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::fabs(a(i, i)));
  const double floor = tol * dmax;

  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > floor)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

}  // namespace degen
