#pragma once

#include <vector>

#include "rpnm/rational.hpp"

namespace rpnm {

using RatMat = std::vector<std::vector<Rat>>;

/// Exact determinant by rational Gaussian elimination.
Rat exact_det(RatMat m);

/// Exact rank by fraction-free (Bareiss) elimination on the cleared-denominator
/// integer matrix.
int exact_rank(const RatMat& m);

/// Determinant after deleting row i and column i (0-based).
Rat principal_minor_det(const RatMat& m, int i);

/// Univariate polynomial with exact rational coefficients, c[k] * x^k.
/// Provides the sign-variation root counting used to decide Condition 1.2
/// exactly for codimension 2.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs);

  const std::vector<Rat>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero

  Rat eval(const Rat& x) const;
  UniPoly derivative() const;

  /// Number of distinct real roots in the closed interval [a, b] (Sturm).
  int count_roots_closed(const Rat& a, const Rat& b) const;

  /// Bisects down to an interval of width <= width_bound around some root in
  /// [a, b]; returns the midpoint. Requires count_roots_closed(a,b) >= 1.
  Rat isolate_root(const Rat& a, const Rat& b, const Rat& width_bound) const;

 private:
  std::vector<Rat> c_;  // empty == zero polynomial
  std::vector<UniPoly> sturm_chain() const;
  static int sign_variations(const std::vector<UniPoly>& chain, const Rat& x);
};

UniPoly unipoly_sum(const UniPoly& a, const UniPoly& b);
UniPoly unipoly_mul(const UniPoly& a, const UniPoly& b);
UniPoly unipoly_scale(const UniPoly& a, const Rat& s);

/// det of a matrix of univariate polynomials (expansion by minors with
/// bitmask memoization; intended for small n).
UniPoly unipoly_matrix_det(const std::vector<std::vector<UniPoly>>& m);

}  // namespace rpnm
