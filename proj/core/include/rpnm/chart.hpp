#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpnm/polynomial.hpp"
#include "rpnm/rational.hpp"

namespace rpnm {

using RatMatrix = std::vector<std::vector<Rat>>;

/// Local graph chart (x, f_1(x), ..., f_R(x)) over the closed box x0 +- eps0.
/// Components are polynomial with exact rational coefficients, so the entire
/// counting predicate stays in exact arithmetic.
class ChartSpec {
 public:
  ChartSpec(int n, int R, std::vector<Rat> x0, Rat epsilon0,
            std::vector<PolynomialMap> components);

  int n() const { return n_; }
  int R() const { return R_; }
  int ambient_dim() const { return n_ + R_; }
  const std::vector<Rat>& x0() const { return x0_; }
  const Rat& epsilon0() const { return epsilon0_; }
  const std::vector<PolynomialMap>& components() const { return components_; }

  /// Second partial d^2 f_r / dx_i dx_j as a polynomial (precomputed, i<=j).
  const PolynomialMap& second_partial(int r, int i, int j) const;

  /// Sum_r t_r * H_{f_r}(x), exact. The upper triangle is computed once and
  /// mirrored, so the result is symmetric by construction.
  RatMatrix weighted_hessian(const std::vector<Rat>& t, const std::vector<Rat>& x) const;
  Eigen::MatrixXd weighted_hessian_d(const std::vector<Rat>& t, const std::vector<Rat>& x) const;
  Eigen::MatrixXd weighted_hessian_d(std::span<const double> t, std::span<const double> x) const;

 private:
  int n_, R_;
  std::vector<Rat> x0_;
  Rat epsilon0_;
  std::vector<PolynomialMap> components_;
  // hess_[r][i*n+j] for i<=j
  std::vector<std::vector<PolynomialMap>> hess_;
};

/// The fixed C_c^infty mollifier: amplitude * exp(-1/(1 - |(x-center)/radius|_2^2))
/// inside the open L2 ball of the given radius, 0 outside.
struct BumpWeight {
  std::vector<Rat> center;
  Rat radius;
  double amplitude = 1.0;

  BumpWeight(std::vector<Rat> c, Rat r, double a = 1.0);

  int dim() const { return static_cast<int>(center.size()); }
  double operator()(std::span<const double> x) const;
  /// Analytic gradient (used by cross-check tests).
  std::vector<double> gradient(std::span<const double> x) const;

  std::vector<double> center_d() const;
  double radius_d() const { return radius.get_d(); }
};

double weight_eval(const BumpWeight& w, std::span<const double> x);

RatMatrix weighted_hessian(const ChartSpec& c, const std::vector<Rat>& t,
                           const std::vector<Rat>& x);

/// Chart file I/O (JSON document: n, R, x0, epsilon0, components).
ChartSpec load_chart_json(const std::string& text);
ChartSpec load_chart_file(const std::string& path);
std::string chart_to_json(const ChartSpec& c);

}  // namespace rpnm
