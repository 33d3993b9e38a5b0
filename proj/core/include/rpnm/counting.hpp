#pragma once

#include <utility>
#include <vector>

#include "rpnm/chart.hpp"
#include "rpnm/kernels.hpp"
#include "rpnm/rational.hpp"

namespace rpnm {

/// One (Q, delta) cell. Unweighted totals are exact integers; weighted totals
/// are compensated sums accumulated in lexicographic (q, a) order.
struct CountResult {
  long long Q = 0;
  Rat delta;
  double n_weighted = 0.0;     // sum of omega over counted points
  double n0_weighted = 0.0;    // sum of omega over every chart-box point
  long long n_unweighted = 0;
  long long n0_unweighted = 0;
  long long n_on_manifold = 0;  // delta = 0 count
  double main_term = 0.0;       // (2 delta)^R * n0_weighted
  double error = 0.0;           // |n_weighted - main_term|
};

/// Integer box for one denominator q: a_i in [ceil(q(x0_i - eps0)),
/// floor(q(x0_i + eps0))]. Every a/q in the closed chart box appears once.
struct EnumerationPlan {
  long q = 0;
  std::vector<std::pair<long, long>> bounds;  // inclusive per-axis ranges

  bool empty() const;
  long long point_count() const;
};

EnumerationPlan plan_slice(const ChartSpec& c, long q);

/// Lexicographic iteration over the integer vectors of one q-slice.
class SlicePoints {
 public:
  SlicePoints(const ChartSpec& c, long q) : plan_(plan_slice(c, q)) {}
  explicit SlicePoints(EnumerationPlan plan) : plan_(std::move(plan)) {}

  class iterator {
   public:
    using value_type = std::vector<long>;
    iterator() = default;  // end
    explicit iterator(const EnumerationPlan* plan);
    const std::vector<long>& operator*() const { return a_; }
    iterator& operator++();
    bool operator==(const iterator& o) const { return done_ == o.done_; }

   private:
    const EnumerationPlan* plan_ = nullptr;
    std::vector<long> a_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(&plan_); }
  iterator end() const { return iterator(); }
  const EnumerationPlan& plan() const { return plan_; }

 private:
  EnumerationPlan plan_;
};

inline SlicePoints enumerate_slice(const ChartSpec& c, long q) { return SlicePoints(c, q); }

/// Exact count of N_omega(Q, delta), N_0 and the delta = 0 count in one pass.
/// The predicate ||q f_r(a/q)|| <= delta is decided in integer arithmetic.
/// With w == nullptr the weight is treated as identically 1 on the box.
/// Deterministic for any thread count: each q-slice is reduced independently
/// and slices are merged in ascending q order.
CountResult count(const ChartSpec& c, const BumpWeight* w, long Q, const Rat& delta,
                  int threads = 1);

struct N0Result {
  double weighted = 0.0;
  long long unweighted = 0;
};

/// Totals with no distance predicate (same enumeration order as count, so the
/// delta = 1/2 identity holds bit-for-bit).
N0Result count_n0(const ChartSpec& c, const BumpWeight* w, long Q, int threads = 1);

struct SandwichSum {
  double lower = 0.0;  // sum omega(a/q) S^-_J(q f(a/q))
  double upper = 0.0;  // sum omega(a/q) S^+_J(q f(a/q))
};

/// Selberg sandwich of the weighted count, codimension 1 only.
SandwichSum selberg_sandwich_sum(const ChartSpec& c, const BumpWeight* w, long Q,
                                 const Rat& delta, int J, int threads = 1);

}  // namespace rpnm
