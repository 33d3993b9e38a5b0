#include "rpnm/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rpnm/kahan.hpp"

namespace rpnm {

namespace {

// ---------------------------------------------------------------------------
// Compiled integer form of one chart component.
//
// With D = max(deg f, 1) and f = g / denom for an integer-coefficient g,
//   q f(a/q) = [ sum_e c_e a^e q^(D-|e|) ] / (denom q^(D-1)),
// so the whole predicate ||q f_r(a/q)|| <= delta reduces to integer
// arithmetic. The level structure partially evaluates variables left to
// right; advancing the odometer at axis l only recomputes levels l+1 onward,
// and the innermost axis is a dense Horner step.

struct CompiledComponent {
  int n = 0;
  uint32_t D = 1;
  Int denom = 1;

  std::vector<Int> base_coeffs;     // integer coefficient per level-0 slot
  std::vector<uint32_t> total_deg;  // |e| per level-0 slot

  struct Trans {
    int src;
    int dst;
    uint32_t exp;
  };
  std::vector<int> level_size;                  // levels 0..n-1
  std::vector<std::vector<Trans>> transitions;  // axes 0..n-2
  std::vector<uint32_t> last_exponent;          // per level-(n-1) slot
  std::vector<uint32_t> max_exp_at_axis;        // per axis
  uint32_t last_maxdeg = 0;
};

CompiledComponent compile_component(const PolynomialMap& p) {
  CompiledComponent cc;
  cc.n = p.n_vars();
  cc.D = std::max<uint32_t>(1, p.total_degree());
  const auto& terms = p.terms();
  for (const auto& t : terms)
    mpz_lcm(cc.denom.get_mpz_t(), cc.denom.get_mpz_t(), t.coeff.get_den().get_mpz_t());

  cc.max_exp_at_axis.assign(cc.n, 0);
  for (const auto& t : terms)
    for (int i = 0; i < cc.n; ++i)
      cc.max_exp_at_axis[i] = std::max(cc.max_exp_at_axis[i], t.exps[i]);

  for (const auto& t : terms) {
    Rat scaled = t.coeff * Rat(cc.denom);
    cc.base_coeffs.push_back(scaled.get_num());  // exact integer now
    uint32_t d = 0;
    for (auto e : t.exps) d += e;
    cc.total_deg.push_back(d);
  }

  // Build the suffix levels. Level l slots are the distinct exponent
  // suffixes exps[l..]; each slot forwards to its tail at level l+1.
  std::vector<std::vector<std::vector<uint32_t>>> suffixes(cc.n);
  std::vector<std::map<std::vector<uint32_t>, int>> index(cc.n);
  for (const auto& t : terms) {
    for (int l = 0; l < cc.n; ++l) {
      std::vector<uint32_t> s(t.exps.begin() + l, t.exps.end());
      if (index[l].emplace(s, static_cast<int>(suffixes[l].size())).second)
        suffixes[l].push_back(std::move(s));
    }
  }
  // Level-0 slots must align with base_coeffs order: rebuild level 0 as the
  // term list itself (exponent tuples are unique by construction).
  suffixes[0].clear();
  index[0].clear();
  for (const auto& t : terms) {
    index[0][t.exps] = static_cast<int>(suffixes[0].size());
    suffixes[0].push_back(t.exps);
  }

  cc.level_size.resize(cc.n);
  for (int l = 0; l < cc.n; ++l) cc.level_size[l] = static_cast<int>(suffixes[l].size());

  cc.transitions.resize(std::max(cc.n - 1, 0));
  for (int l = 0; l + 1 < cc.n; ++l) {
    for (int k = 0; k < cc.level_size[l]; ++k) {
      const auto& s = suffixes[l][k];
      std::vector<uint32_t> tail(s.begin() + 1, s.end());
      cc.transitions[l].push_back({k, index[l + 1].at(tail), s[0]});
    }
  }
  cc.last_exponent.resize(cc.level_size[cc.n - 1]);
  for (int k = 0; k < cc.level_size[cc.n - 1]; ++k) {
    cc.last_exponent[k] = suffixes[cc.n - 1][k][0];
    cc.last_maxdeg = std::max(cc.last_maxdeg, cc.last_exponent[k]);
  }
  return cc;
}

// Mutable per-thread evaluation state for one component.
struct ComponentState {
  std::vector<std::vector<Int>> values;  // per level
  std::vector<Int> dense;                // last-axis Horner coefficients
  Int M;                                 // denom * q^(D-1)
  Int pM;                                // delta numerator * M
  Int N, rem, dist, tmp;

  void init(const CompiledComponent& cc) {
    values.resize(cc.n);
    for (int l = 0; l < cc.n; ++l) values[l].assign(cc.level_size[l], Int(0));
    dense.assign(cc.last_maxdeg + 1, Int(0));
  }
};

struct SliceTotals {
  long long n0 = 0;
  long long n = 0;
  long long on_manifold = 0;
  double w_n0 = 0.0;
  double w_n = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Shared immutable context for one counting job.
struct JobContext {
  const ChartSpec* chart = nullptr;
  const BumpWeight* w = nullptr;
  Rat delta;
  std::vector<CompiledComponent> comps;
  const SelbergPair* sandwich = nullptr;  // set for sandwich sums
};

class SliceWorker {
 public:
  explicit SliceWorker(const JobContext& ctx) : ctx_(ctx) {
    const int n = ctx.chart->n();
    states_.resize(ctx.comps.size());
    for (size_t r = 0; r < ctx.comps.size(); ++r) states_[r].init(ctx.comps[r]);
    axis_maxexp_.assign(n, 0);
    for (const auto& cc : ctx.comps)
      for (int i = 0; i < n; ++i)
        axis_maxexp_[i] = std::max(axis_maxexp_[i], cc.max_exp_at_axis[i]);
    pow_.resize(n);
    for (int i = 0; i < n; ++i) pow_[i].assign(axis_maxexp_[i] + 1, Int(1));
    x_.assign(n, 0.0);
  }

  SliceTotals run(long q) {
    SliceTotals out;
    EnumerationPlan plan = plan_slice(*ctx_.chart, q);
    if (plan.empty()) return out;
    const int n = ctx_.chart->n();
    const double qd = static_cast<double>(q);
    const bool weighted = ctx_.w != nullptr;

    prepare_q(q);

    std::vector<long> a(n);
    for (int i = 0; i < n; ++i) a[i] = plan.bounds[i].first;
    for (int l = 0; l + 1 < n; ++l) set_axis(l, a[l], qd);

    Kahan kw_n0, kw_n, klo, kup;
    while (true) {
      const long lo = plan.bounds[n - 1].first;
      const long hi = plan.bounds[n - 1].second;
      for (long v = lo; v <= hi; ++v) {
        x_[n - 1] = static_cast<double>(v) / qd;
        double omega = 1.0;
        if (weighted) omega = (*ctx_.w)(x_);
        ++out.n0;
        if (weighted) kw_n0.add(omega);

        bool pass = true, integral = true;
        for (size_t r = 0; r < ctx_.comps.size(); ++r) {
          eval_last(r, v);
          if (!predicate(r, pass, integral)) break;
        }
        if (pass) {
          ++out.n;
          if (weighted) kw_n.add(omega);
        }
        if (integral) ++out.on_manifold;
        if (ctx_.sandwich) {
          const double frac = fraction(0, v);
          klo.add(omega * selberg_eval(*ctx_.sandwich, KernelSign::minus, frac));
          kup.add(omega * selberg_eval(*ctx_.sandwich, KernelSign::plus, frac));
        }
      }
      int l = n - 2;
      while (l >= 0 && a[l] == plan.bounds[l].second) --l;
      if (l < 0) break;
      ++a[l];
      set_axis(l, a[l], qd);
      for (int ll = l + 1; ll + 1 <= n - 1; ++ll) {
        a[ll] = plan.bounds[ll].first;
        set_axis(ll, a[ll], qd);
      }
    }
    out.w_n0 = kw_n0.sum;
    out.w_n = kw_n.sum;
    out.lower = klo.sum;
    out.upper = kup.sum;
    return out;
  }

 private:
  void prepare_q(long q) {
    for (size_t r = 0; r < ctx_.comps.size(); ++r) {
      const auto& cc = ctx_.comps[r];
      auto& st = states_[r];
      // q powers up to D
      Int qp = 1;
      std::vector<Int> qpow(cc.D + 1);
      qpow[0] = 1;
      for (uint32_t k = 1; k <= cc.D; ++k) qpow[k] = qpow[k - 1] * q;
      for (size_t k = 0; k < cc.base_coeffs.size(); ++k)
        st.values[0][k] = cc.base_coeffs[k] * qpow[cc.D - cc.total_deg[k]];
      st.M = cc.denom * qpow[cc.D - 1];
      st.pM = Int(ctx_.delta.get_num()) * st.M;
    }
  }

  void set_axis(int l, long value, double qd) {
    x_[l] = static_cast<double>(value) / qd;
    auto& pw = pow_[l];
    pw[0] = 1;
    for (size_t k = 1; k < pw.size(); ++k) {
      pw[k] = pw[k - 1];
      mpz_mul_si(pw[k].get_mpz_t(), pw[k].get_mpz_t(), value);
    }
    const int n = ctx_.chart->n();
    for (size_t r = 0; r < ctx_.comps.size(); ++r) {
      const auto& cc = ctx_.comps[r];
      auto& st = states_[r];
      if (l == n - 2) {
        for (auto& d : st.dense) d = 0;
        for (const auto& tr : cc.transitions[l]) {
          mpz_addmul(st.dense[cc.last_exponent[tr.dst]].get_mpz_t(),
                     st.values[l][tr.src].get_mpz_t(), pw[tr.exp].get_mpz_t());
        }
      } else {
        auto& dst = st.values[l + 1];
        for (auto& v : dst) v = 0;
        for (const auto& tr : cc.transitions[l]) {
          mpz_addmul(dst[tr.dst].get_mpz_t(), st.values[l][tr.src].get_mpz_t(),
                     pw[tr.exp].get_mpz_t());
        }
      }
    }
  }

  void eval_last(size_t r, long v) {
    auto& st = states_[r];
    const auto& dense = st.dense;
    mpz_set(st.N.get_mpz_t(), dense.back().get_mpz_t());
    for (int k = static_cast<int>(dense.size()) - 2; k >= 0; --k) {
      mpz_mul_si(st.N.get_mpz_t(), st.N.get_mpz_t(), v);
      mpz_add(st.N.get_mpz_t(), st.N.get_mpz_t(), dense[k].get_mpz_t());
    }
  }

  // Updates pass/integral for component r; returns false once both are
  // settled negative (callers may stop early only when nothing else is
  // accumulated; we keep it simple and always continue while either holds).
  bool predicate(size_t r, bool& pass, bool& integral) {
    auto& st = states_[r];
    mpz_fdiv_r(st.rem.get_mpz_t(), st.N.get_mpz_t(), st.M.get_mpz_t());
    const bool is_int = mpz_sgn(st.rem.get_mpz_t()) == 0;
    if (!is_int) integral = false;
    if (pass) {
      mpz_sub(st.dist.get_mpz_t(), st.M.get_mpz_t(), st.rem.get_mpz_t());
      if (mpz_cmp(st.dist.get_mpz_t(), st.rem.get_mpz_t()) > 0)
        mpz_set(st.dist.get_mpz_t(), st.rem.get_mpz_t());
      mpz_mul(st.tmp.get_mpz_t(), st.dist.get_mpz_t(), ctx_.delta.get_den().get_mpz_t());
      if (mpz_cmp(st.tmp.get_mpz_t(), st.pM.get_mpz_t()) > 0) pass = false;
    }
    return pass || integral;
  }

  // q f(a/q) mod 1 for component r, from the exact remainder.
  double fraction(size_t r, long v) {
    auto& st = states_[r];
    // rem already holds N mod M from the predicate for this point.
    (void)v;
    return mpz_get_d(st.rem.get_mpz_t()) / mpz_get_d(st.M.get_mpz_t());
  }

  const JobContext& ctx_;
  std::vector<ComponentState> states_;
  std::vector<std::vector<Int>> pow_;
  std::vector<uint32_t> axis_maxexp_;
  std::vector<double> x_;
};

std::vector<SliceTotals> run_all_slices(const JobContext& ctx, long Q, int threads) {
  if (Q < 1) throw std::invalid_argument("count: Q must be >= 1");
  if (threads <= 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SliceTotals> totals(static_cast<size_t>(Q) + 1);
  if (threads == 1) {
    SliceWorker worker(ctx);
    for (long q = 1; q <= Q; ++q) totals[static_cast<size_t>(q)] = worker.run(q);
    return totals;
  }
  // Larger q means more points; handing slices out from the top keeps the
  // pool busy until the end.
  std::atomic<long> next(Q);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      try {
        SliceWorker worker(ctx);
        while (true) {
          long q = next.fetch_sub(1);
          if (q < 1) break;
          totals[static_cast<size_t>(q)] = worker.run(q);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return totals;
}

}  // namespace

bool EnumerationPlan::empty() const {
  for (const auto& [lo, hi] : bounds)
    if (lo > hi) return true;
  return bounds.empty();
}

long long EnumerationPlan::point_count() const {
  if (empty()) return 0;
  long long p = 1;
  for (const auto& [lo, hi] : bounds) p *= (hi - lo + 1);
  return p;
}

EnumerationPlan plan_slice(const ChartSpec& c, long q) {
  if (q < 1) throw std::invalid_argument("plan_slice: q must be >= 1");
  EnumerationPlan plan;
  plan.q = q;
  for (int i = 0; i < c.n(); ++i) {
    Rat lo_r = Rat(q) * (c.x0()[i] - c.epsilon0());
    Rat hi_r = Rat(q) * (c.x0()[i] + c.epsilon0());
    Int lo = rat_ceil(lo_r), hi = rat_floor(hi_r);
    if (!lo.fits_slong_p() || !hi.fits_slong_p())
      throw std::overflow_error("plan_slice: integer box exceeds the enumeration budget");
    plan.bounds.emplace_back(lo.get_si(), hi.get_si());
  }
  return plan;
}

SlicePoints::iterator::iterator(const EnumerationPlan* plan) : plan_(plan) {
  if (!plan_ || plan_->empty()) return;
  a_.resize(plan_->bounds.size());
  for (size_t i = 0; i < a_.size(); ++i) a_[i] = plan_->bounds[i].first;
  done_ = false;
}

SlicePoints::iterator& SlicePoints::iterator::operator++() {
  int axis = static_cast<int>(a_.size()) - 1;
  while (axis >= 0) {
    if (++a_[axis] <= plan_->bounds[axis].second) break;
    a_[axis] = plan_->bounds[axis].first;
    --axis;
  }
  if (axis < 0) done_ = true;
  return *this;
}

namespace {

CountResult assemble(const ChartSpec& c, const BumpWeight* w, long Q, const Rat& delta,
                     const std::vector<SliceTotals>& totals) {
  CountResult res;
  res.Q = Q;
  res.delta = delta;
  Kahan w_n0, w_n;
  for (long q = 1; q <= Q; ++q) {
    const auto& s = totals[static_cast<size_t>(q)];
    res.n0_unweighted += s.n0;
    res.n_unweighted += s.n;
    res.n_on_manifold += s.on_manifold;
    w_n0.add(s.w_n0);
    w_n.add(s.w_n);
  }
  if (w) {
    res.n0_weighted = w_n0.sum;
    res.n_weighted = w_n.sum;
  } else {
    res.n0_weighted = static_cast<double>(res.n0_unweighted);
    res.n_weighted = static_cast<double>(res.n_unweighted);
  }
  Rat factor = rat_pow(2 * delta, static_cast<unsigned long>(c.R()));
  res.main_term = factor.get_d() * res.n0_weighted;
  res.error = std::fabs(res.n_weighted - res.main_term);
  return res;
}

}  // namespace

CountResult count(const ChartSpec& c, const BumpWeight* w, long Q, const Rat& delta,
                  int threads) {
  if (delta < 0 || delta > Rat(1, 2))
    throw std::invalid_argument("count: delta must lie in [0, 1/2]");
  JobContext ctx;
  ctx.chart = &c;
  ctx.w = w;
  ctx.delta = delta;
  for (const auto& f : c.components()) ctx.comps.push_back(compile_component(f));
  auto totals = run_all_slices(ctx, Q, threads);
  return assemble(c, w, Q, delta, totals);
}

N0Result count_n0(const ChartSpec& c, const BumpWeight* w, long Q, int threads) {
  // Same enumeration and accumulation order as count(), minus the predicate,
  // so the delta = 1/2 identity is bitwise.
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SliceTotals> totals(static_cast<size_t>(Q) + 1);
  auto run_slice = [&](long q) {
    SliceTotals out;
    EnumerationPlan plan = plan_slice(c, q);
    if (plan.empty()) return out;
    out.n0 = plan.point_count();
    if (!w) return out;
    const int n = c.n();
    const double qd = static_cast<double>(q);
    std::vector<double> x(n);
    std::vector<long> a(n);
    for (int i = 0; i < n; ++i) {
      a[i] = plan.bounds[i].first;
      x[i] = static_cast<double>(a[i]) / qd;
    }
    Kahan acc;
    while (true) {
      const long lo = plan.bounds[n - 1].first, hi = plan.bounds[n - 1].second;
      for (long v = lo; v <= hi; ++v) {
        x[n - 1] = static_cast<double>(v) / qd;
        acc.add((*w)(x));
      }
      int l = n - 2;
      while (l >= 0 && a[l] == plan.bounds[l].second) --l;
      if (l < 0) break;
      ++a[l];
      x[l] = static_cast<double>(a[l]) / qd;
      for (int ll = l + 1; ll <= n - 2; ++ll) {
        a[ll] = plan.bounds[ll].first;
        x[ll] = static_cast<double>(a[ll]) / qd;
      }
    }
    out.w_n0 = acc.sum;
    return out;
  };

  if (Q < 1) throw std::invalid_argument("count_n0: Q must be >= 1");
  if (threads == 1) {
    for (long q = 1; q <= Q; ++q) totals[static_cast<size_t>(q)] = run_slice(q);
  } else {
    std::atomic<long> next(Q);
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        try {
          while (true) {
            long q = next.fetch_sub(1);
            if (q < 1) break;
            totals[static_cast<size_t>(q)] = run_slice(q);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  N0Result res;
  Kahan acc;
  for (long q = 1; q <= Q; ++q) {
    const auto& s = totals[static_cast<size_t>(q)];
    res.unweighted += s.n0;
    acc.add(s.w_n0);
  }
  res.weighted = w ? acc.sum : static_cast<double>(res.unweighted);
  return res;
}

SandwichSum selberg_sandwich_sum(const ChartSpec& c, const BumpWeight* w, long Q,
                                 const Rat& delta, int J, int threads) {
  if (c.R() != 1)
    throw std::invalid_argument("selberg_sandwich_sum: only codimension 1 is supported");
  if (J < 1) throw std::invalid_argument("selberg_sandwich_sum: J must be >= 1");
  SelbergPair pair = selberg_build(J, delta);
  JobContext ctx;
  ctx.chart = &c;
  ctx.w = w;
  ctx.delta = delta;
  ctx.sandwich = &pair;
  for (const auto& f : c.components()) ctx.comps.push_back(compile_component(f));
  auto totals = run_all_slices(ctx, Q, threads);
  Kahan lo, up;
  for (long q = 1; q <= Q; ++q) {
    lo.add(totals[static_cast<size_t>(q)].lower);
    up.add(totals[static_cast<size_t>(q)].upper);
  }
  return SandwichSum{lo.sum, up.sum};
}

}  // namespace rpnm
