#include "rpnm/legendre.hpp"

#include <cmath>

namespace rpnm {

namespace {

constexpr int kMaxNewtonIters = 100;
constexpr int kMaxHalvings = 60;
constexpr double kMaxCondition = 1e12;

}  // namespace

Eigen::VectorXd invert_gradient(const SmoothScalarField& F, const Eigen::VectorXd& z,
                                const Eigen::VectorXd& x_init, double tol) {
  if (z.size() != F.dim || x_init.size() != F.dim)
    throw std::invalid_argument("invert_gradient: dimension mismatch");
  if (tol <= 0) throw std::invalid_argument("invert_gradient: tol must be positive");

  Eigen::VectorXd x = x_init;
  Eigen::VectorXd g = F.gradient(x) - z;
  for (int iter = 0; iter < kMaxNewtonIters; ++iter) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm <= tol) return x;

    Eigen::MatrixXd H = F.hessian(x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kMaxCondition)
      throw SolveError("invert_gradient: singular-hessian");

    Eigen::VectorXd step = svd.solve(g);
    double scale = 1.0;
    bool decreased = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      Eigen::VectorXd x_try = x - scale * step;
      Eigen::VectorXd g_try = F.gradient(x_try) - z;
      if (g_try.lpNorm<Eigen::Infinity>() < gnorm) {
        x = x_try;
        g = g_try;
        decreased = true;
        break;
      }
      scale *= 0.5;
    }
    if (!decreased) throw SolveError("invert_gradient: no-convergence (damping stalled)");
  }
  if ((F.gradient(x) - z).lpNorm<Eigen::Infinity>() <= tol) return x;
  throw SolveError("invert_gradient: no-convergence (iteration budget)");
}

LegendrePoint legendre_value(const SmoothScalarField& F, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& x_init, double tol) {
  LegendrePoint p;
  p.z = z;
  p.x = invert_gradient(F, z, x_init, tol);
  p.value = z.dot(p.x) - F.value(p.x);
  p.residual = (F.gradient(p.x) - z).lpNorm<Eigen::Infinity>();
  return p;
}

double hessian_identity_residual(const SmoothScalarField& F, const Eigen::VectorXd& z,
                                 double tol) {
  const int d = F.dim;
  const double h = 1e-4 * (1.0 + z.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd x0 = invert_gradient(F, z, Eigen::VectorXd::Zero(d), tol);

  auto fstar = [&](const Eigen::VectorXd& zz) {
    return legendre_value(F, zz, x0, tol).value;
  };

  // Second-order central differences of F* around z.
  Eigen::MatrixXd Hstar(d, d);
  const double f0 = fstar(z);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      double v;
      if (i == j) {
        Eigen::VectorXd zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        v = (fstar(zp) - 2.0 * f0 + fstar(zm)) / (h * h);
      } else {
        Eigen::VectorXd zpp = z, zpm = z, zmp = z, zmm = z;
        zpp[i] += h; zpp[j] += h;
        zpm[i] += h; zpm[j] -= h;
        zmp[i] -= h; zmp[j] += h;
        zmm[i] -= h; zmm[j] -= h;
        v = (fstar(zpp) - fstar(zpm) - fstar(zmp) + fstar(zmm)) / (4.0 * h * h);
      }
      Hstar(i, j) = v;
      Hstar(j, i) = v;
    }
  }

  Eigen::MatrixXd prod = Hstar * F.hessian(x0);
  return (prod - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
}

double involution_residual(const SmoothScalarField& F, const Eigen::VectorXd& x,
                           double tol) {
  const int d = F.dim;
  // First transform, wrapped as a field: grad F* = (grad F)^{-1} and
  // H_{F*}(z) = H_F((grad F)^{-1}(z))^{-1}; the value is a genuine solve.
  SmoothScalarField G;
  G.dim = d;
  Eigen::VectorXd warm = x;
  G.value = [&F, warm, tol](const Eigen::VectorXd& z) {
    return legendre_value(F, z, warm, tol).value;
  };
  G.gradient = [&F, warm, tol](const Eigen::VectorXd& z) {
    return invert_gradient(F, z, warm, tol);
  };
  G.hessian = [&F, warm, tol](const Eigen::VectorXd& z) {
    Eigen::VectorXd xx = invert_gradient(F, z, warm, tol);
    return F.hessian(xx).inverse().eval();
  };

  // Second transform evaluated at x; the outer Newton starts from a neutral
  // initial point so it genuinely exercises the inversion.
  LegendrePoint p = legendre_value(G, x, x, tol);
  return std::fabs(p.value - F.value(x));
}

SmoothScalarField make_diagonal_quadratic(const Eigen::VectorXd& c) {
  SmoothScalarField F;
  F.dim = static_cast<int>(c.size());
  F.value = [c](const Eigen::VectorXd& x) { return c.dot(x.cwiseProduct(x)); };
  F.gradient = [c](const Eigen::VectorXd& x) {
    return (2.0 * c.cwiseProduct(x)).eval();
  };
  F.hessian = [c](const Eigen::VectorXd& x) {
    (void)x;
    return (2.0 * c.asDiagonal().toDenseMatrix()).eval();
  };
  return F;
}

SmoothScalarField make_isotropic_quadratic(int dim) {
  SmoothScalarField F;
  F.dim = dim;
  F.value = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  F.gradient = [](const Eigen::VectorXd& x) { return x.eval(); };
  F.hessian = [dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(dim, dim).eval();
  };
  return F;
}

SmoothScalarField make_convex_quartic(int dim, double eps) {
  SmoothScalarField F;
  F.dim = dim;
  F.value = [eps](const Eigen::VectorXd& x) {
    return 0.5 * x.squaredNorm() + eps * x.array().pow(4).sum();
  };
  F.gradient = [eps](const Eigen::VectorXd& x) {
    return (x.array() + 4.0 * eps * x.array().pow(3)).matrix().eval();
  };
  F.hessian = [eps, dim](const Eigen::VectorXd& x) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) H(i, i) += 12.0 * eps * x[i] * x[i];
    return H;
  };
  return F;
}

SmoothScalarField field_from_polynomial(const PolynomialMap& p) {
  const int d = p.n_vars();
  auto shared = std::make_shared<PolynomialMap>(p);
  std::vector<PolynomialMap> grads;
  std::vector<PolynomialMap> hess;
  for (int i = 0; i < d; ++i) grads.push_back(p.partial(i));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) hess.push_back(grads[i].partial(j));
  auto gshared = std::make_shared<std::vector<PolynomialMap>>(std::move(grads));
  auto hshared = std::make_shared<std::vector<PolynomialMap>>(std::move(hess));

  SmoothScalarField F;
  F.dim = d;
  F.value = [shared](const Eigen::VectorXd& x) {
    return shared->eval(std::span<const double>(x.data(), x.size()));
  };
  F.gradient = [gshared, d](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(d);
    std::span<const double> xs(x.data(), x.size());
    for (int i = 0; i < d; ++i) g[i] = (*gshared)[i].eval(xs);
    return g;
  };
  F.hessian = [hshared, d](const Eigen::VectorXd& x) {
    Eigen::MatrixXd H(d, d);
    std::span<const double> xs(x.data(), x.size());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) = (*hshared)[static_cast<size_t>(i) * d + j].eval(xs);
    return H;
  };
  return F;
}

}  // namespace rpnm
