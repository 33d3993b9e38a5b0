#include "rpnm/oscillatory.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "rpnm/kahan.hpp"

namespace rpnm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Newton iteration on P_n from the Tricomi initial guess; standard and
/// accurate to ~1e-15 even for very high orders.
std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Recurrence for P_n(xi) and P_{n-1}(xi).
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / pp;
      xi -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    const double wi = 2.0 / ((1.0 - xi * xi) * pp * pp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  return {std::move(x), std::move(w)};
}

std::complex<double> integrate_at_nodes(const OscIntegrand& o, const std::vector<int>& counts,
                                        long* evals) {
  const int d = o.dim;
  std::vector<const std::vector<double>*> nodes(d), weights(d);
  for (int i = 0; i < d; ++i) {
    const auto& rule = gauss_legendre_rule(counts[i]);
    nodes[i] = &rule.first;
    weights[i] = &rule.second;
  }
  std::vector<double> mid(d), half(d);
  for (int i = 0; i < d; ++i) {
    mid[i] = 0.5 * (o.box[i].first + o.box[i].second);
    half[i] = 0.5 * (o.box[i].second - o.box[i].first);
  }
  double jacobian = 1.0;
  for (int i = 0; i < d; ++i) jacobian *= half[i];

  Kahan re, im;
  std::vector<int> idx(d, 0);
  Eigen::VectorXd X(d);
  long count = 0;
  while (true) {
    double wt = jacobian;
    for (int i = 0; i < d; ++i) {
      X[i] = mid[i] + half[i] * (*nodes[i])[idx[i]];
      wt *= (*weights[i])[idx[i]];
    }
    const double a = o.amplitude(X);
    ++count;
    if (a != 0.0) {
      const double ph = kTwoPi * o.lambda * o.phase.value(X);
      re.add(wt * a * std::cos(ph));
      im.add(wt * a * std::sin(ph));
    }
    int axis = d - 1;
    while (axis >= 0) {
      if (++idx[axis] < counts[axis]) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  if (evals) *evals += count;
  return {re.sum, im.sum};
}

int base_nodes(const OscIntegrand& o, int axis) {
  const double width = o.box[axis].second - o.box[axis].first;
  const double suggested = std::ceil(8.0 * o.lambda * width);
  return std::max(32, static_cast<int>(suggested));
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_rule(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double OscIntegrand::max_width() const {
  double w = 0.0;
  for (const auto& [lo, hi] : box) w = std::max(w, hi - lo);
  return w;
}

IntegralResult integrate(const OscIntegrand& o, int level) {
  if (level < 1) throw std::invalid_argument("integrate: level must be >= 1");
  if (o.dim < 1 || static_cast<int>(o.box.size()) != o.dim)
    throw std::invalid_argument("integrate: box/dim mismatch");
  if (o.lambda < 0) throw std::invalid_argument("integrate: negative lambda");
  if (o.lambda * o.max_width() > 1e5)
    throw std::invalid_argument("integrate: resolution guard exceeded (lambda * width > 1e5)");

  IntegralResult res;
  const int scale = 1 << (level - 1);
  std::vector<int> counts(o.dim), counts2(o.dim);
  for (int i = 0; i < o.dim; ++i) {
    counts[i] = base_nodes(o, i) * scale;
    counts2[i] = counts[i] * 2;
  }
  std::complex<double> coarse = integrate_at_nodes(o, counts, &res.evaluations);
  std::complex<double> fine = integrate_at_nodes(o, counts2, &res.evaluations);
  res.value = coarse;
  res.error_estimate = std::abs(fine - coarse);
  return res;
}

std::complex<double> stationary_main_term(const OscIntegrand& o, const Eigen::VectorXd& v0) {
  if (v0.size() != o.dim) throw std::invalid_argument("stationary_main_term: bad v0 size");
  const Eigen::VectorXd g = o.phase.gradient(v0);
  if (g.lpNorm<Eigen::Infinity>() > 1e-8)
    throw std::invalid_argument("stationary_main_term: not-a-critical-point");
  const Eigen::MatrixXd H = o.phase.hessian(v0);
  const int sigma = signature(H);  // throws degenerate-hessian
  const double delta = std::fabs(H.determinant());
  const double phase0 = o.lambda * o.phase.value(v0) + sigma / 8.0;
  const double amp = o.amplitude(v0) / std::sqrt(delta) *
                     std::pow(o.lambda, -0.5 * o.dim);
  return amp * std::complex<double>(std::cos(kTwoPi * phase0), std::sin(kTwoPi * phase0));
}

int signature(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("signature: not square");
  if (!H.isApprox(H.transpose(), 1e-12))
    throw std::invalid_argument("signature: not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const double scale = H.cwiseAbs().maxCoeff();
  int sig = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    if (std::fabs(ev) < 1e-10 * scale)
      throw std::domain_error("signature: near-singular input");
    sig += (ev > 0) ? 1 : -1;
  }
  return sig;
}

DecayFit decay_fit(std::span<const double> lambdas, std::span<const IntegralResult> results) {
  if (lambdas.size() != results.size())
    throw std::invalid_argument("decay_fit: size mismatch");
  if (lambdas.size() < 4) throw std::invalid_argument("decay_fit: need at least 4 points");

  DecayFit fit;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    const double v = std::abs(results[i].value);
    if (v < 1e-30) {
      ++fit.dropped_underflow;
      continue;
    }
    if (results[i].error_estimate > 0.1 * v) {
      ++fit.dropped_unreliable;
      continue;
    }
    lx.push_back(std::log(lambdas[i]));
    ly.push_back(std::log(v));
  }
  fit.used = static_cast<int>(lx.size());
  if (fit.used < 2) throw SolveError("decay_fit: degenerate fit (too few reliable points)");

  double mx = 0, my = 0;
  for (int i = 0; i < fit.used; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= fit.used;
  my /= fit.used;
  double num = 0, den = 0;
  for (int i = 0; i < fit.used; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.slope = num / den;
  return fit;
}

OscIntegrand make_bump_integrand(const BumpWeight& w, SmoothScalarField phase, double lambda) {
  OscIntegrand o;
  o.dim = w.dim();
  if (phase.dim != o.dim) throw std::invalid_argument("make_bump_integrand: dim mismatch");
  auto wp = std::make_shared<BumpWeight>(w);
  o.amplitude = [wp](const Eigen::VectorXd& x) {
    return (*wp)(std::span<const double>(x.data(), x.size()));
  };
  o.phase = std::move(phase);
  o.lambda = lambda;
  const auto c = w.center_d();
  const double r = w.radius_d();
  for (int i = 0; i < o.dim; ++i) o.box.emplace_back(c[i] - r, c[i] + r);
  return o;
}

}  // namespace rpnm
