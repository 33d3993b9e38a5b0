#include "rpnm/exact_linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace rpnm {

Rat exact_det(RatMat m) {
  const int n = static_cast<int>(m.size());
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("exact_det: not square");
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) { pivot = r; break; }
    if (pivot < 0) return Rat(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Rat inv = 1 / m[col][col];
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rat factor = m[r][col] * inv;
      for (int c2 = col; c2 < n; ++c2) m[r][c2] -= factor * m[col][c2];
    }
  }
  return det;
}

int exact_rank(const RatMat& m) {
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(m[0].size());
  // Clear denominators row by row; rank is unchanged.
  std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
  for (int i = 0; i < rows; ++i) {
    Int l = 1;
    for (int j = 0; j < cols; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m[i][j].get_den().get_mpz_t());
    for (int j = 0; j < cols; ++j) {
      Rat v = m[i][j] * Rat(l);
      a[i][j] = v.get_num();  // denominator is 1 now
    }
  }
  // Bareiss fraction-free elimination.
  int rank = 0;
  Int prev = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][col] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int c2 = col + 1; c2 < cols; ++c2) {
        Int t = a[rank][col] * a[r][c2] - a[r][col] * a[rank][c2];
        mpz_divexact(a[r][c2].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

Rat principal_minor_det(const RatMat& m, int i) {
  const int n = static_cast<int>(m.size());
  if (i < 0 || i >= n) throw std::out_of_range("principal_minor_det: index out of range");
  RatMat sub;
  sub.reserve(n - 1);
  for (int r = 0; r < n; ++r) {
    if (r == i) continue;
    std::vector<Rat> row;
    row.reserve(n - 1);
    for (int c = 0; c < n; ++c)
      if (c != i) row.push_back(m[r][c]);
    sub.push_back(std::move(row));
  }
  if (sub.empty()) return Rat(1);  // 0x0 minor
  return exact_det(std::move(sub));
}

// ---------------------------------------------------------------------------

UniPoly::UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat UniPoly::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<Rat> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UniPoly(std::move(d));
}

namespace {

// Remainder of polynomial division a / b (b nonzero).
std::vector<Rat> poly_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
  const int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db) {
    const int da = static_cast<int>(a.size()) - 1;
    Rat f = a.back() / b.back();
    for (int k = 0; k <= db; ++k) a[da - db + k] -= f * b[k];
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.empty()) break;
  }
  return a;
}

int rat_sign(const Rat& r) { return sgn(r); }

}  // namespace

std::vector<UniPoly> UniPoly::sturm_chain() const {
  std::vector<UniPoly> chain;
  chain.push_back(*this);
  chain.push_back(derivative());
  while (!chain.back().is_zero() && chain.back().degree() >= 0) {
    const auto& p0 = chain[chain.size() - 2].c_;
    const auto& p1 = chain.back().c_;
    if (p1.empty()) break;
    std::vector<Rat> r = poly_rem(p0, p1);
    if (r.empty()) break;
    for (auto& v : r) v = -v;
    chain.emplace_back(UniPoly(std::move(r)));
  }
  return chain;
}

int UniPoly::sign_variations(const std::vector<UniPoly>& chain, const Rat& x) {
  int var = 0, last = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = rat_sign(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

int UniPoly::count_roots_closed(const Rat& a, const Rat& b) const {
  if (is_zero()) throw std::domain_error("count_roots_closed: zero polynomial");
  if (a > b) throw std::invalid_argument("count_roots_closed: empty interval");
  if (degree() == 0) return 0;
  // Sturm counts distinct roots in (a, b]; add the endpoint a separately.
  auto chain = sturm_chain();
  int count = sign_variations(chain, a) - sign_variations(chain, b);
  if (eval(a) == 0) ++count;
  return count;
}

Rat UniPoly::isolate_root(const Rat& a, const Rat& b, const Rat& width_bound) const {
  if (count_roots_closed(a, b) < 1)
    throw std::domain_error("isolate_root: no root in interval");
  Rat lo = a, hi = b;
  while (hi - lo > width_bound) {
    Rat mid = (lo + hi) / 2;
    if (eval(mid) == 0) return mid;
    if (count_roots_closed(lo, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 2;
}

UniPoly unipoly_sum(const UniPoly& a, const UniPoly& b) {
  std::vector<Rat> c(std::max(a.coeffs().size(), b.coeffs().size()), Rat(0));
  for (size_t k = 0; k < a.coeffs().size(); ++k) c[k] += a.coeffs()[k];
  for (size_t k = 0; k < b.coeffs().size(); ++k) c[k] += b.coeffs()[k];
  return UniPoly(std::move(c));
}

UniPoly unipoly_mul(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<Rat> c(a.coeffs().size() + b.coeffs().size() - 1, Rat(0));
  for (size_t i = 0; i < a.coeffs().size(); ++i)
    for (size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return UniPoly(std::move(c));
}

UniPoly unipoly_scale(const UniPoly& a, const Rat& s) {
  std::vector<Rat> c = a.coeffs();
  for (auto& v : c) v *= s;
  return UniPoly(std::move(c));
}

namespace {

UniPoly det_rec(const std::vector<std::vector<UniPoly>>& m, unsigned cols_mask, int row,
                std::unordered_map<unsigned, UniPoly>& memo) {
  const int n = static_cast<int>(m.size());
  if (row == n) return UniPoly(std::vector<Rat>{Rat(1)});
  auto it = memo.find(cols_mask);
  if (it != memo.end()) return it->second;
  UniPoly acc;
  int parity = 0;
  for (int c = 0; c < n; ++c) {
    if (!(cols_mask & (1u << c))) continue;
    UniPoly sub = det_rec(m, cols_mask & ~(1u << c), row + 1, memo);
    UniPoly term = unipoly_mul(m[row][c], sub);
    if (parity % 2 == 1) term = unipoly_scale(term, Rat(-1));
    acc = unipoly_sum(acc, term);
    ++parity;
  }
  memo.emplace(cols_mask, acc);
  return acc;
}

}  // namespace

UniPoly unipoly_matrix_det(const std::vector<std::vector<UniPoly>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return UniPoly(std::vector<Rat>{Rat(1)});
  if (n > 20) throw std::invalid_argument("unipoly_matrix_det: matrix too large");
  std::unordered_map<unsigned, UniPoly> memo;
  return det_rec(m, (1u << n) - 1u, 0, memo);
}

}  // namespace rpnm
