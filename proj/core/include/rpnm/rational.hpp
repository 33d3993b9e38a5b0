#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace rpnm {

/// Exact rational number. All counting predicates and chart coefficients run
/// on these; doubles only appear where a weight or kernel value is inherently
/// transcendental.
using Rat = mpq_class;
using Int = mpz_class;

/// mpq_class(num, den) does not canonicalize; this does.
inline Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p" (base 10). The result is always canonicalized.
/// Throws std::invalid_argument on malformed input or a zero denominator.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: '" + s + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational literal: '" + s + "'");
  q.canonicalize();
  return q;
}

/// Canonical "p/q" form; integers print without the "/1".
inline std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

/// Nearest integer; halves round down (ties never matter for a distance
/// to the nearest integer, which is 1/2 either way).
inline Int rat_round(const Rat& r) {
  return rat_floor(r + Rat(1, 2));
}

/// min over m in Z of |r - m|, as an exact rational in [0, 1/2].
inline Rat dist_to_nearest_int(const Rat& r) {
  Rat d = r - Rat(rat_round(r));
  return abs(d);
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
  Rat r;
  mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
  r.canonicalize();
  return r;
}

inline std::vector<Rat> parse_rat_vector(const std::vector<std::string>& parts) {
  std::vector<Rat> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(parse_rat(p));
  return out;
}

}  // namespace rpnm
