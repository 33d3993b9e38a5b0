#pragma once

#include <span>
#include <string>
#include <vector>

#include "rpnm/rational.hpp"

namespace rpnm {

enum class KernelSign { plus, minus };

/// Degree-J trigonometric majorant/minorant pair for the periodized indicator
/// chi_delta (||x|| <= delta). Coefficients are real and even in j, with the
/// extremal means hat(S^+-)(0) = 2 delta +- 1/(J+1).
struct SelbergPair {
  int J = 0;
  Rat delta;
  // coeff[j] for 0 <= j <= J; the full spectrum is symmetric, coeff(-j) = coeff(j).
  std::vector<double> coeffs_plus;
  std::vector<double> coeffs_minus;

  double coeff(KernelSign s, int j) const;
};

SelbergPair selberg_build(int J, const Rat& delta);
double selberg_eval(const SelbergPair& p, KernelSign s, double x);

/// Internal pieces of the construction, exposed so tests can probe them:
/// the degree-(K-1) sawtooth approximant and the mean-1 Fejer kernel.
double vaaler_sawtooth(int K, double x);
double fejer_mean_one(int K, double x);

/// Fejer kernel F_D of (coefficient) degree D-1, F_D(0) = 1, F_D >= 0.
/// Evaluated by the coefficient sum and cross-checked against the closed
/// sine form away from sin(pi theta) ~ 0.
double fejer_eval(int D, double theta);

struct FejerCheckResult {
  bool ok = false;
  double min_slack = 0.0;   // min over samples of pi^2/4 * F_D - chi_{1/T}
  double worst_theta = 0.0;
  int D = 0;
};

/// Verifies chi_{1/T}(theta) <= pi^2/4 * F_D(theta) with D = floor(T/2) at the
/// given samples (all must satisfy ||theta|| <= 1/T).
FejerCheckResult fejer_majorant_check(double T, std::span<const double> theta_samples);

/// CSV dump, columns j,s_plus,s_minus at 17 significant digits.
std::string selberg_coeffs_csv(const SelbergPair& p);

}  // namespace rpnm
