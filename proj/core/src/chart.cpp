#include "rpnm/chart.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace rpnm {

using nlohmann::json;

ChartSpec::ChartSpec(int n, int R, std::vector<Rat> x0, Rat epsilon0,
                     std::vector<PolynomialMap> components)
    : n_(n), R_(R), x0_(std::move(x0)), epsilon0_(std::move(epsilon0)),
      components_(std::move(components)) {
  if (n_ < 2) throw std::invalid_argument("ChartSpec: manifold dimension n must be >= 2");
  if (R_ < 1) throw std::invalid_argument("ChartSpec: codimension R must be >= 1");
  if (static_cast<int>(x0_.size()) != n_)
    throw std::invalid_argument("ChartSpec: x0 has wrong dimension");
  if (epsilon0_ <= 0) throw std::invalid_argument("ChartSpec: epsilon0 must be positive");
  if (static_cast<int>(components_.size()) != R_)
    throw std::invalid_argument("ChartSpec: expected R component maps");
  for (const auto& f : components_)
    if (f.n_vars() != n_)
      throw std::invalid_argument("ChartSpec: component arity differs from n");

  hess_.resize(R_);
  for (int r = 0; r < R_; ++r) {
    hess_[r].reserve(static_cast<size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
      PolynomialMap di = components_[r].partial(i);
      for (int j = 0; j < n_; ++j) {
        if (j < i) {
          hess_[r].push_back(hess_[r][static_cast<size_t>(j) * n_ + i]);
        } else {
          hess_[r].push_back(di.partial(j));
        }
      }
    }
  }
}

const PolynomialMap& ChartSpec::second_partial(int r, int i, int j) const {
  return hess_[r][static_cast<size_t>(i) * n_ + j];
}

RatMatrix ChartSpec::weighted_hessian(const std::vector<Rat>& t,
                                      const std::vector<Rat>& x) const {
  if (static_cast<int>(t.size()) != R_)
    throw std::invalid_argument("weighted_hessian: t has wrong dimension");
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("weighted_hessian: x has wrong dimension");
  RatMatrix H(n_, std::vector<Rat>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      Rat v = 0;
      for (int r = 0; r < R_; ++r) {
        if (t[r] == 0) continue;
        v += t[r] * second_partial(r, i, j).eval_rational(x);
      }
      H[i][j] = v;
      H[j][i] = v;
    }
  }
  return H;
}

Eigen::MatrixXd ChartSpec::weighted_hessian_d(const std::vector<Rat>& t,
                                              const std::vector<Rat>& x) const {
  RatMatrix H = weighted_hessian(t, x);
  Eigen::MatrixXd M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) M(i, j) = H[i][j].get_d();
  return M;
}

Eigen::MatrixXd ChartSpec::weighted_hessian_d(std::span<const double> t,
                                              std::span<const double> x) const {
  if (static_cast<int>(t.size()) != R_ || static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("weighted_hessian_d: dimension mismatch");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      double v = 0.0;
      for (int r = 0; r < R_; ++r)
        if (t[r] != 0.0) v += t[r] * second_partial(r, i, j).eval(x);
      M(i, j) = v;
      M(j, i) = v;
    }
  return M;
}

RatMatrix weighted_hessian(const ChartSpec& c, const std::vector<Rat>& t,
                           const std::vector<Rat>& x) {
  return c.weighted_hessian(t, x);
}

BumpWeight::BumpWeight(std::vector<Rat> c, Rat r, double a)
    : center(std::move(c)), radius(std::move(r)), amplitude(a) {
  if (center.empty()) throw std::invalid_argument("BumpWeight: empty center");
  if (radius <= 0) throw std::invalid_argument("BumpWeight: radius must be positive");
  if (amplitude <= 0) throw std::invalid_argument("BumpWeight: amplitude must be positive");
}

std::vector<double> BumpWeight::center_d() const {
  std::vector<double> c(center.size());
  for (size_t i = 0; i < center.size(); ++i) c[i] = center[i].get_d();
  return c;
}

double BumpWeight::operator()(std::span<const double> x) const {
  if (x.size() != center.size())
    throw std::invalid_argument("BumpWeight: point has wrong dimension");
  const double kappa = radius_d();
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - center[i].get_d()) / kappa;
    s += u * u;
  }
  if (s >= 1.0) return 0.0;
  return amplitude * std::exp(-1.0 / (1.0 - s));
}

std::vector<double> BumpWeight::gradient(std::span<const double> x) const {
  const double kappa = radius_d();
  double s = 0.0;
  std::vector<double> u(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    u[i] = (x[i] - center[i].get_d()) / kappa;
    s += u[i] * u[i];
  }
  std::vector<double> g(x.size(), 0.0);
  if (s >= 1.0) return g;
  const double w = amplitude * std::exp(-1.0 / (1.0 - s));
  const double d = 1.0 - s;
  for (size_t i = 0; i < x.size(); ++i) g[i] = -w * 2.0 * u[i] / (kappa * d * d);
  return g;
}

double weight_eval(const BumpWeight& w, std::span<const double> x) { return w(x); }

namespace {

PolynomialMap component_from_json(const json& jterms, int n) {
  std::vector<Term> terms;
  for (const auto& jt : jterms) {
    Term t;
    t.coeff = parse_rat(jt.at("coeff").get<std::string>());
    for (const auto& e : jt.at("exp")) {
      long v = e.get<long>();
      if (v < 0) throw std::invalid_argument("chart: negative exponent");
      t.exps.push_back(static_cast<uint32_t>(v));
    }
    if (static_cast<int>(t.exps.size()) != n)
      throw std::invalid_argument("chart: exponent tuple arity differs from n");
    terms.push_back(std::move(t));
  }
  return PolynomialMap(n, std::move(terms));
}

}  // namespace

ChartSpec load_chart_json(const std::string& text) {
  json j = json::parse(text);
  const int n = j.at("n").get<int>();
  const int R = j.at("R").get<int>();
  std::vector<Rat> x0;
  for (const auto& s : j.at("x0")) x0.push_back(parse_rat(s.get<std::string>()));
  Rat eps0 = parse_rat(j.at("epsilon0").get<std::string>());
  std::vector<PolynomialMap> comps;
  for (const auto& jc : j.at("components")) comps.push_back(component_from_json(jc, n));
  return ChartSpec(n, R, std::move(x0), std::move(eps0), std::move(comps));
}

ChartSpec load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open chart file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_chart_json(ss.str());
}

std::string chart_to_json(const ChartSpec& c) {
  json j;
  j["n"] = c.n();
  j["R"] = c.R();
  json x0 = json::array();
  for (const auto& v : c.x0()) x0.push_back(rat_to_string(v));
  j["x0"] = x0;
  j["epsilon0"] = rat_to_string(c.epsilon0());
  json comps = json::array();
  for (const auto& f : c.components()) {
    json jterms = json::array();
    for (const auto& t : f.terms()) {
      json jt;
      jt["coeff"] = rat_to_string(t.coeff);
      jt["exp"] = t.exps;
      jterms.push_back(jt);
    }
    comps.push_back(jterms);
  }
  j["components"] = comps;
  return j.dump(2);
}

}  // namespace rpnm
