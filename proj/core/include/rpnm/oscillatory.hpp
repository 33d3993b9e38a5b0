#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rpnm/chart.hpp"
#include "rpnm/legendre.hpp"

namespace rpnm {

/// Integrand omega(X) e(lambda phi(X)) over the support box of the amplitude.
struct OscIntegrand {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> amplitude;
  SmoothScalarField phase;
  double lambda = 0.0;
  std::vector<std::pair<double, double>> box;  // per-axis [lo, hi]

  double max_width() const;
};

struct IntegralResult {
  std::complex<double> value;
  double error_estimate = 0.0;  // |level vs level+1|
  long evaluations = 0;
};

/// Tensor Gauss-Legendre with per-axis node count
/// max(32, ceil(8 lambda width)) * 2^(level-1); the same rule at level+1
/// supplies the error estimate. Deterministic for fixed inputs and level.
/// Throws std::invalid_argument when lambda * max box width > 1e5.
IntegralResult integrate(const OscIntegrand& o, int level);

/// Leading stationary-phase term e(lambda phi(v0) + sigma/8) Delta^{-1/2}
/// lambda^{-d/2} omega(v0). Requires |grad phi(v0)|_inf <= 1e-8 and a
/// nonsingular Hessian.
std::complex<double> stationary_main_term(const OscIntegrand& o, const Eigen::VectorXd& v0);

/// Positive minus negative eigenvalue count; throws on a near-singular input
/// (some |eig| < 1e-10 |H|_inf).
int signature(const Eigen::MatrixXd& H);

struct DecayFit {
  double slope = 0.0;
  int used = 0;
  int dropped_underflow = 0;    // |value| < 1e-30
  int dropped_unreliable = 0;   // error_estimate > 10% of |value|
};

/// Least-squares slope of log|value| against log lambda after dropping
/// underflowed and unreliable points. Throws SolveError when fewer than two
/// usable points remain.
DecayFit decay_fit(std::span<const double> lambdas, std::span<const IntegralResult> results);

/// Bump amplitude restricted to its support box (the common fixture).
OscIntegrand make_bump_integrand(const BumpWeight& w, SmoothScalarField phase, double lambda);

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1] (cached).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_rule(int n);

}  // namespace rpnm
