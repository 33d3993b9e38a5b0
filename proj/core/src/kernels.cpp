#include "rpnm/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rpnm {

namespace {

constexpr double kPi = std::numbers::pi;

// Vaaler's interpolation multiplier: J-hat(t) = pi t (1-|t|) cot(pi t) + |t|
// on (-1, 1), even, with J-hat(0) = 1. These taper the sawtooth Fourier
// coefficients so that |psi_K - psi| <= F_K / (2K).
double vaaler_multiplier(double t) {
  double a = std::fabs(t);
  if (a < 1e-12) return 1.0;
  return kPi * a * (1.0 - a) / std::tan(kPi * a) + a;
}

double sawtooth(double x) {
  double f = x - std::floor(x);
  return f - 0.5;
}

}  // namespace

double vaaler_sawtooth(int K, double x) {
  double acc = 0.0;
  for (int j = 1; j <= K - 1; ++j)
    acc -= vaaler_multiplier(static_cast<double>(j) / K) / (kPi * j) *
           std::sin(2.0 * kPi * j * x);
  return acc;
}

double fejer_mean_one(int K, double x) {
  double acc = 1.0;
  for (int j = 1; j <= K - 1; ++j)
    acc += 2.0 * (1.0 - static_cast<double>(j) / K) * std::cos(2.0 * kPi * j * x);
  return acc;
}

double SelbergPair::coeff(KernelSign s, int j) const {
  int a = std::abs(j);
  if (a > J) return 0.0;
  return s == KernelSign::plus ? coeffs_plus[a] : coeffs_minus[a];
}

SelbergPair selberg_build(int J, const Rat& delta) {
  if (J < 1) throw std::invalid_argument("selberg_build: J must be >= 1");
  if (delta <= 0 || delta > Rat(1, 2))
    throw std::invalid_argument("selberg_build: delta must lie in (0, 1/2]");

  // chi_delta = chi_[a,b] with a = -delta, b = delta. Away from the jumps,
  //   chi_[a,b](x) = (b - a) + psi(x - b) - psi(x - a)
  // for the sawtooth psi(x) = {x} - 1/2. Replacing psi by the degree-J Vaaler
  // approximant psi_K (K = J+1) and adding/subtracting the Fejer envelope
  // (F_K(x-a) + F_K(x-b)) / (2K) gives the extremal majorant/minorant.
  const int K = J + 1;
  const double d = delta.get_d();
  SelbergPair p;
  p.J = J;
  p.delta = delta;
  p.coeffs_plus.resize(J + 1);
  p.coeffs_minus.resize(J + 1);
  p.coeffs_plus[0] = 2.0 * d + 1.0 / K;
  p.coeffs_minus[0] = 2.0 * d - 1.0 / K;
  for (int j = 1; j <= J; ++j) {
    const double saw = vaaler_multiplier(static_cast<double>(j) / K) *
                       std::sin(2.0 * kPi * j * d) / (kPi * j);
    const double env = (1.0 - static_cast<double>(j) / K) / K *
                       std::cos(2.0 * kPi * j * d);
    p.coeffs_plus[j] = saw + env;
    p.coeffs_minus[j] = saw - env;
  }
  return p;
}

double selberg_eval(const SelbergPair& p, KernelSign s, double x) {
  // The spectrum is real and even, so the coefficient sum collapses to a
  // cosine series; the imaginary part vanishes identically.
  double acc = p.coeff(s, 0);
  for (int j = 1; j <= p.J; ++j)
    acc += 2.0 * p.coeff(s, j) * std::cos(2.0 * kPi * j * x);
  return acc;
}

double fejer_eval(int D, double theta) {
  if (D < 1) throw std::invalid_argument("fejer_eval: D must be >= 1");
  double acc = 1.0 / D;
  for (int k = 1; k <= D - 1; ++k)
    acc += 2.0 * (D - k) / (static_cast<double>(D) * D) * std::cos(2.0 * kPi * k * theta);
  // Closed sine form cross-check (skipped near the removable singularity).
  const double s = std::sin(kPi * theta);
  if (std::fabs(s) > 1e-6) {
    const double num = std::sin(kPi * D * theta);
    const double closed = (num * num) / (static_cast<double>(D) * D * s * s);
    if (std::fabs(closed - acc) > 1e-9)
      throw std::runtime_error("fejer_eval: coefficient sum and sine form disagree");
  }
  return acc;
}

FejerCheckResult fejer_majorant_check(double T, std::span<const double> theta_samples) {
  if (T < 2.0) throw std::invalid_argument("fejer_majorant_check: T must be >= 2");
  FejerCheckResult res;
  res.D = static_cast<int>(std::floor(T / 2.0));
  bool first = true;
  for (double theta : theta_samples) {
    double dist = std::fabs(theta - std::round(theta));
    if (dist > 1.0 / T + 1e-15)
      throw std::invalid_argument("fejer_majorant_check: sample outside ||theta|| <= 1/T");
    const double slack = kPi * kPi / 4.0 * fejer_eval(res.D, theta) - 1.0;
    if (first || slack < res.min_slack) {
      res.min_slack = slack;
      res.worst_theta = theta;
      first = false;
    }
  }
  res.ok = !first && res.min_slack >= 0.0;
  return res;
}

std::string selberg_coeffs_csv(const SelbergPair& p) {
  std::ostringstream out;
  out << "j,s_plus,s_minus\n";
  char buf[64];
  for (int j = -p.J; j <= p.J; ++j) {
    out << j << ",";
    std::snprintf(buf, sizeof buf, "%.17g", p.coeff(KernelSign::plus, j));
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", p.coeff(KernelSign::minus, j));
    out << buf << "\n";
  }
  return out.str();
}

}  // namespace rpnm
