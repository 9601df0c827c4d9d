#include "degen/poly.hpp"

#include <stdexcept>
#include <string>

namespace degen {
namespace {

// z^e for integer e >= 0, with 0^0 == 1.
double ipow(double z, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

}  // namespace

PolyFunction::PolyFunction(int dimension, std::vector<PolyTerm> terms) : dim_(dimension) {
  for (auto& t : terms) add_term(t.coef, std::move(t.exponents));
}

void PolyFunction::add_term(double coef, std::vector<int> exponents) {
  if (static_cast<int>(exponents.size()) != dim_)
    throw std::invalid_argument("term has " + std::to_string(exponents.size()) +
                                " exponents, expected " + std::to_string(dim_));
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("negative exponent in polynomial term");
  terms_.push_back(PolyTerm{coef, std::move(exponents)});
}

void PolyFunction::check_point(const Vec& z) const {
  if (static_cast<int>(z.size()) != dim_)
    throw std::invalid_argument("point has dimension " + std::to_string(z.size()) +
                                ", polynomial expects " + std::to_string(dim_));
}

double PolyFunction::eval(const Vec& z) const {
  check_point(z);
  double s = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (int j = 0; j < dim_; ++j) v *= ipow(z[j], t.exponents[j]);
    s += v;
  }
  return s;
}

Vec PolyFunction::gradient(const Vec& z) const {
  check_point(z);
  Vec g(dim_, 0.0);
  for (const auto& t : terms_) {
    for (int j = 0; j < dim_; ++j) {
      const int ej = t.exponents[j];
      if (ej == 0) continue;
      double v = t.coef * ej * ipow(z[j], ej - 1);
      for (int k = 0; k < dim_; ++k)
        if (k != j) v *= ipow(z[k], t.exponents[k]);
      g[j] += v;
    }
  }
  return g;
}

Mat PolyFunction::hessian(const Vec& z) const {
  check_point(z);
  Mat h(dim_, dim_);
  for (const auto& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      const int ei = t.exponents[i];
      // diagonal entry
      if (ei >= 2) {
        double v = t.coef * ei * (ei - 1) * ipow(z[i], ei - 2);
        for (int k = 0; k < dim_; ++k)
          if (k != i) v *= ipow(z[k], t.exponents[k]);
        h(i, i) += v;
      }
      // strict upper triangle, mirrored below
      for (int j = i + 1; j < dim_; ++j) {
        const int ej = t.exponents[j];
        if (ei == 0 || ej == 0) continue;
        double v = t.coef * ei * ej * ipow(z[i], ei - 1) * ipow(z[j], ej - 1);
        for (int k = 0; k < dim_; ++k)
          if (k != i && k != j) v *= ipow(z[k], t.exponents[k]);
        h(i, j) += v;
        h(j, i) = h(i, j);
      }
    }
  }
  return h;
}

bool PolyFunction::operator==(const PolyFunction& o) const {
  if (dim_ != o.dim_ || terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coef != o.terms_[i].coef || terms_[i].exponents != o.terms_[i].exponents)
      return false;
  return true;
}

}  // namespace degen
