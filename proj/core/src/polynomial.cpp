#include "rpnm/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rpnm {

PolynomialMap::PolynomialMap(int n_vars, std::vector<Term> terms) : n_vars_(n_vars) {
  if (n_vars < 1) throw std::invalid_argument("PolynomialMap: n_vars must be >= 1");
  std::map<std::vector<uint32_t>, Rat> collected;
  for (auto& t : terms) {
    if (static_cast<int>(t.exps.size()) != n_vars)
      throw std::invalid_argument("PolynomialMap: exponent tuple has wrong arity");
    collected[t.exps] += t.coeff;
  }
  for (auto& [e, c] : collected) {
    if (c != 0) terms_.push_back(Term{c, e});
  }
}

uint32_t PolynomialMap::total_degree() const {
  uint32_t deg = 0;
  for (const auto& t : terms_) {
    uint32_t d = 0;
    for (auto e : t.exps) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

Rat PolynomialMap::eval_rational(std::span<const long> a, long q) const {
  if (static_cast<int>(a.size()) != n_vars_)
    throw std::invalid_argument("eval_rational: point has wrong dimension");
  if (q < 1) throw std::invalid_argument("eval_rational: q must be >= 1");
  std::vector<Rat> x(n_vars_);
  for (int i = 0; i < n_vars_; ++i) x[i] = make_rat(a[i], q);
  return eval_rational(x);
}

Rat PolynomialMap::eval_rational(const std::vector<Rat>& x) const {
  if (static_cast<int>(x.size()) != n_vars_)
    throw std::invalid_argument("eval_rational: point has wrong dimension");
  Rat acc = 0;
  for (const auto& t : terms_) {
    Rat m = t.coeff;
    for (int i = 0; i < n_vars_; ++i)
      for (uint32_t k = 0; k < t.exps[i]; ++k) m *= x[i];
    acc += m;
  }
  return acc;
}

double PolynomialMap::eval(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff.get_d();
    for (int i = 0; i < n_vars_; ++i)
      if (t.exps[i] > 0) m *= std::pow(x[i], static_cast<int>(t.exps[i]));
    acc += m;
  }
  return acc;
}

PolynomialMap PolynomialMap::partial(int i) const {
  if (i < 0 || i >= n_vars_) throw std::invalid_argument("partial: variable index out of range");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exps[i] == 0) continue;
    Term d = t;
    d.coeff *= static_cast<long>(t.exps[i]);
    d.exps[i] -= 1;
    out.push_back(std::move(d));
  }
  return PolynomialMap(n_vars_, std::move(out));
}

std::vector<double> PolynomialMap::gradient(std::span<const double> x) const {
  std::vector<double> g(n_vars_);
  for (int i = 0; i < n_vars_; ++i) g[i] = partial(i).eval(x);
  return g;
}

PolynomialMap PolynomialMap::scaled(const Rat& c) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= c;
  return PolynomialMap(n_vars_, std::move(out));
}

PolynomialMap PolynomialMap::sum(const PolynomialMap& a, const PolynomialMap& b) {
  if (a.n_vars_ != b.n_vars_) throw std::invalid_argument("sum: arity mismatch");
  std::vector<Term> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return PolynomialMap(a.n_vars_, std::move(out));
}

}  // namespace rpnm
