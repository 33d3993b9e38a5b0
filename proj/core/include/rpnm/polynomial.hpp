#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rpnm/rational.hpp"

namespace rpnm {

/// One monomial: coeff * x1^e1 * ... * xn^en.
struct Term {
  Rat coeff;
  std::vector<uint32_t> exps;
};

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are kept normalized: exponent tuples are unique and sorted, zero
/// coefficients dropped. Evaluation at a rational point is exact, which is
/// what makes the counting predicate ||q f(a/q)|| <= delta decidable.
class PolynomialMap {
 public:
  PolynomialMap(int n_vars, std::vector<Term> terms);

  int n_vars() const { return n_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max total degree; 0 for the zero polynomial.
  uint32_t total_degree() const;

  /// p(a/q) as an exact rational, fully reduced.
  Rat eval_rational(std::span<const long> a, long q) const;
  Rat eval_rational(const std::vector<Rat>& x) const;
  double eval(std::span<const double> x) const;

  /// Symbolic partial derivative with respect to variable i (0-based).
  PolynomialMap partial(int i) const;
  std::vector<double> gradient(std::span<const double> x) const;

  PolynomialMap scaled(const Rat& c) const;
  static PolynomialMap sum(const PolynomialMap& a, const PolynomialMap& b);

 private:
  int n_vars_;
  std::vector<Term> terms_;
};

}  // namespace rpnm
