#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace degen {

using Vec = std::vector<double>;

/// Dense row-major matrix.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

inline Vec matvec(const Mat& m, const Vec& x) {
  assert(static_cast<int>(x.size()) == m.cols());
  Vec y(m.rows(), 0.0);
  for (int r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (int c = 0; c < m.cols(); ++c) s += m(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

inline Vec matTvec(const Mat& m, const Vec& x) {
  assert(static_cast<int>(x.size()) == m.rows());
  Vec y(m.cols(), 0.0);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) y[c] += m(r, c) * x[r];
  return y;
}

/// Solves a x = b by LU with partial pivoting. Returns false when a pivot
/// falls below tol times the largest entry of the matrix.
bool lu_solve(Mat a, Vec b, Vec& x, double tol = 1e-13);

/// Cholesky probe: true when every pivot of the factorization stays above
/// tol * max(1, max diagonal entry).
bool is_positive_definite(const Mat& a, double tol = 1e-12);

}  // namespace degen
