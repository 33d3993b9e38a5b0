#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "rpnm/polynomial.hpp"

namespace rpnm {

/// Thrown when a Newton inversion runs out of iterations or meets a
/// numerically singular Hessian.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form scalar field with consistent value/gradient/Hessian evaluators.
struct SmoothScalarField {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct LegendrePoint {
  Eigen::VectorXd z;      // gradient-space point
  Eigen::VectorXd x;      // preimage, grad F(x) = z
  double value = 0.0;     // F*(z) = z.x - F(x)
  double residual = 0.0;  // |grad F(x) - z|_inf
};

/// Damped Newton solve of grad F(x) = z (step halving until |g| decreases).
/// Throws SolveError on iteration exhaustion or a Hessian whose condition
/// estimate exceeds 1e12.
Eigen::VectorXd invert_gradient(const SmoothScalarField& F, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& x_init, double tol);

LegendrePoint legendre_value(const SmoothScalarField& F, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& x_init, double tol);

/// |H_{F*}(grad F(x)) . H_F(x) - I|_inf with H_{F*} obtained by second-order
/// central differences of F* (step 1e-4 (1+|z|_inf)), so the inverse-Hessian
/// identity is probed through an independent route.
double hessian_identity_residual(const SmoothScalarField& F, const Eigen::VectorXd& z,
                                 double tol = 1e-10);

/// |F**(x) - F(x)| via two nested transforms.
double involution_residual(const SmoothScalarField& F, const Eigen::VectorXd& x,
                           double tol = 1e-10);

/// F = sum_i c_i x_i^2 (diagonal quadratic).
SmoothScalarField make_diagonal_quadratic(const Eigen::VectorXd& c);
/// F = |x|^2 / 2.
SmoothScalarField make_isotropic_quadratic(int dim);
/// F = |x|^2 / 2 + eps * sum_i x_i^4; strongly convex, curvature varies with x.
SmoothScalarField make_convex_quartic(int dim, double eps = 0.1);
/// Adapts a polynomial chart component (value/grad/Hessian are symbolic).
SmoothScalarField field_from_polynomial(const PolynomialMap& p);

}  // namespace rpnm
