#pragma once

#include <vector>

#include "degen/linalg.hpp"

namespace degen {

/// One monomial: coef * prod_j z_j^exponents[j].
struct PolyTerm {
  double coef = 0.0;
  std::vector<int> exponents;
};

/// Multivariate polynomial stored as a term list.
///
/// Duplicate monomials are allowed and sum on evaluation; the empty term
/// list is the zero function. All derivatives are exact (term-wise power
/// rule), so functions built from this type are twice Lipschitz continuously
/// differentiable on any compact set.
class PolyFunction {
 public:
  PolyFunction() = default;
  explicit PolyFunction(int dimension) : dim_(dimension) {}
  PolyFunction(int dimension, std::vector<PolyTerm> terms);

  /// Appends one term; throws std::invalid_argument on an exponent count
  /// mismatch or a negative exponent.
  void add_term(double coef, std::vector<int> exponents);

  int dimension() const { return dim_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }

  double eval(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  /// Exactly symmetric by construction.
  Mat hessian(const Vec& z) const;

  bool operator==(const PolyFunction& o) const;

 private:
  void check_point(const Vec& z) const;

  int dim_ = 0;
  std::vector<PolyTerm> terms_;
};

}  // namespace degen
