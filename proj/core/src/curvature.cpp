#include "rpnm/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace rpnm {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "undecided";
  }
}

std::vector<std::vector<Rat>> sphere_grid(int R, int grid_per_axis) {
  if (R < 1) throw std::invalid_argument("sphere_grid: R must be >= 1");
  if (grid_per_axis < 1) throw std::invalid_argument("sphere_grid: grid too coarse");
  std::vector<std::vector<Rat>> out;
  const int G = grid_per_axis;
  // Face t_face = +1 covers the antipodal pair {t, -t}; the remaining axes
  // sweep a uniform closed grid of [-1, 1].
  for (int face = 0; face < R; ++face) {
    std::vector<int> idx(R - 1, 0);
    while (true) {
      std::vector<Rat> t(R);
      t[face] = 1;
      int k = 0;
      for (int j = 0; j < R; ++j) {
        if (j == face) continue;
        t[j] = make_rat(2 * idx[k] - G, G);
        ++k;
      }
      out.push_back(std::move(t));
      int axis = R - 2;
      while (axis >= 0) {
        if (++idx[axis] <= G) break;
        idx[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return out;
}

namespace {

Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

double matrix_maxnorm(const RatMat& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) v = std::max(v, std::fabs(e.get_d()));
  return v;
}

Eigen::MatrixXd to_eigen(const RatMat& m) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = m[i][j].get_d();
  return M;
}

/// Singular values of a symmetric matrix = |eigenvalues|, ascending.
std::vector<double> singular_values_symmetric(const RatMat& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  std::vector<double> s(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i) s[i] = std::fabs(es.eigenvalues()[i]);
  std::sort(s.begin(), s.end());
  return s;
}

/// Local grid refinement on the sphere face of `center` (the coordinate that
/// equals +-1 stays pinned). Minimizes `metric` over shrinking rational grids.
template <typename Metric>
void refine_on_face(const Metric& metric, std::vector<Rat>& center, Rat& best,
                    Rat spacing, int rounds, int m) {
  const int R = static_cast<int>(center.size());
  std::vector<int> free_axes;
  for (int j = 0; j < R; ++j)
    if (abs_rat(center[j]) != 1) free_axes.push_back(j);
  if (free_axes.empty()) return;
  for (int round = 0; round < rounds; ++round) {
    Rat step = spacing / m;
    std::vector<int> idx(free_axes.size(), 0);
    const int span = 2 * m;
    while (true) {
      std::vector<Rat> t = center;
      for (size_t k = 0; k < free_axes.size(); ++k) {
        Rat v = center[free_axes[k]] + Rat(idx[k] - m) * step;
        if (v < -1) v = -1;
        if (v > 1) v = 1;
        t[free_axes[k]] = v;
      }
      Rat val = metric(t);
      if (val < best) {
        best = val;
        center = t;
      }
      int axis = static_cast<int>(free_axes.size()) - 1;
      while (axis >= 0) {
        if (++idx[axis] <= span) break;
        idx[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    spacing = step;
  }
}

// Same refinement, metric in doubles (for singular values).
template <typename Metric>
void refine_on_face_d(const Metric& metric, std::vector<Rat>& center, double& best,
                      Rat spacing, int rounds, int m) {
  const int R = static_cast<int>(center.size());
  std::vector<int> free_axes;
  for (int j = 0; j < R; ++j)
    if (abs_rat(center[j]) != 1) free_axes.push_back(j);
  if (free_axes.empty()) return;
  for (int round = 0; round < rounds; ++round) {
    Rat step = spacing / m;
    std::vector<int> idx(free_axes.size(), 0);
    const int span = 2 * m;
    while (true) {
      std::vector<Rat> t = center;
      for (size_t k = 0; k < free_axes.size(); ++k) {
        Rat v = center[free_axes[k]] + Rat(idx[k] - m) * step;
        if (v < -1) v = -1;
        if (v > 1) v = 1;
        t[free_axes[k]] = v;
      }
      double val = metric(t);
      if (val < best) {
        best = val;
        center = t;
      }
      int axis = static_cast<int>(free_axes.size()) - 1;
      while (axis >= 0) {
        if (++idx[axis] <= span) break;
        idx[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    spacing = step;
  }
}

/// Face polynomials p(s) = det(A + s B) for the exact R=2 decision.
UniPoly face_det_poly(const RatMat& A, const RatMat& B) {
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<UniPoly>> m(n, std::vector<UniPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = UniPoly({A[i][j], B[i][j]});
  return unipoly_matrix_det(m);
}

}  // namespace

Rat principal_minor(const ChartSpec& c, const std::vector<Rat>& t, int i) {
  if (i < 1 || i > c.n()) throw std::out_of_range("principal_minor: index out of range");
  bool all_zero = true;
  for (const auto& v : t)
    if (v != 0) { all_zero = false; break; }
  if (all_zero) throw std::invalid_argument("principal_minor: t must be nonzero");
  RatMat H = c.weighted_hessian(t, c.x0());
  return principal_minor_det(H, i - 1);
}

CurvatureReport check_condition_full(const ChartSpec& c, int grid_per_axis) {
  if (grid_per_axis < 8)
    throw std::invalid_argument("check_condition_full: grid_per_axis must be >= 8");
  CurvatureReport rep;
  rep.grid_resolution = grid_per_axis;

  auto grid = sphere_grid(c.R(), grid_per_axis);
  Rat best_abs;
  std::vector<Rat> best_t;
  double maxnorm = 0.0;
  bool exact_zero = false;
  for (const auto& t : grid) {
    RatMat H = c.weighted_hessian(t, c.x0());
    maxnorm = std::max(maxnorm, matrix_maxnorm(H));
    Rat d = abs_rat(exact_det(H));
    if (best_t.empty() || d < best_abs) {
      best_abs = d;
      best_t = t;
    }
    if (d == 0 && !exact_zero) {
      exact_zero = true;
      best_abs = d;
      best_t = t;
      break;  // an exact zero settles the scan minimum
    }
  }

  if (!exact_zero) {
    auto metric = [&](const std::vector<Rat>& t) {
      return abs_rat(exact_det(c.weighted_hessian(t, c.x0())));
    };
    refine_on_face(metric, best_t, best_abs, make_rat(2, grid_per_axis), 8, 4);
  }
  rep.min_abs_det = best_abs.get_d();
  rep.witness_full = best_t;

  const double tol = 1e-8 * std::pow(std::max(maxnorm, 1e-300), c.n());

  if (c.R() == 1) {
    // det(t H) = t^n det H, so the single representative decides exactly.
    Rat d = exact_det(c.weighted_hessian({Rat(1)}, c.x0()));
    rep.condition_full = (d != 0) ? Verdict::holds : Verdict::fails;
    rep.full_exact = true;
    if (d == 0) {
      rep.witness_full = {Rat(1)};
      rep.min_abs_det = 0.0;
    }
    return rep;
  }

  if (c.R() == 2) {
    // Exact decision: roots of det on the two representative faces.
    RatMat H1 = c.weighted_hessian({Rat(1), Rat(0)}, c.x0());
    RatMat H2 = c.weighted_hessian({Rat(0), Rat(1)}, c.x0());
    UniPoly p1 = face_det_poly(H1, H2);  // t = (1, s)
    UniPoly p2 = face_det_poly(H2, H1);  // t = (s, 1)
    rep.full_exact = true;
    const Rat one(1), minus_one(-1);
    const Rat width(Int(1), Int(1) << 45);
    bool has_root = false;
    if (p1.is_zero() || p2.is_zero()) {
      has_root = true;
      if (!exact_zero) {
        rep.witness_full = p1.is_zero() ? std::vector<Rat>{Rat(1), Rat(0)}
                                        : std::vector<Rat>{Rat(0), Rat(1)};
        rep.min_abs_det = 0.0;
      }
    } else {
      int n1 = p1.count_roots_closed(minus_one, one);
      int n2 = p2.count_roots_closed(minus_one, one);
      has_root = (n1 + n2) > 0;
      if (has_root && !exact_zero) {
        if (n1 > 0) {
          Rat s = p1.isolate_root(minus_one, one, width);
          rep.witness_full = {Rat(1), s};
        } else {
          Rat s = p2.isolate_root(minus_one, one, width);
          rep.witness_full = {s, Rat(1)};
        }
        rep.min_abs_det =
            abs_rat(exact_det(c.weighted_hessian(rep.witness_full, c.x0()))).get_d();
      }
    }
    rep.condition_full = has_root ? Verdict::fails : Verdict::holds;
    return rep;
  }

  // R >= 3: grid evidence only.
  if (exact_zero)
    rep.condition_full = Verdict::fails;
  else if (rep.min_abs_det > tol)
    rep.condition_full = Verdict::holds;
  else
    rep.condition_full = Verdict::undecided;
  return rep;
}

CurvatureReport check_condition_rank(const ChartSpec& c, int grid_per_axis) {
  if (grid_per_axis < 8)
    throw std::invalid_argument("check_condition_rank: grid_per_axis must be >= 8");
  CurvatureReport rep;
  rep.grid_resolution = grid_per_axis;
  const int n = c.n();

  auto grid = sphere_grid(c.R(), grid_per_axis);
  double best_sigma = -1.0;
  std::vector<Rat> best_t;
  double maxnorm = 0.0;
  for (const auto& t : grid) {
    RatMat H = c.weighted_hessian(t, c.x0());
    maxnorm = std::max(maxnorm, matrix_maxnorm(H));
    int rank = exact_rank(H);
    if (rank <= n - 2) {
      rep.condition_rank = Verdict::fails;
      rep.witness_rank = t;
      rep.exact_witness_rank = rank;
      rep.min_sigma_nminus1 = singular_values_symmetric(H)[1];
      return rep;
    }
    double sigma = singular_values_symmetric(H)[1];
    if (best_t.empty() || sigma < best_sigma) {
      best_sigma = sigma;
      best_t = t;
    }
  }

  auto metric = [&](const std::vector<Rat>& t) {
    RatMat H = c.weighted_hessian(t, c.x0());
    if (exact_rank(H) <= n - 2) return -1.0;  // flags an exact witness
    return singular_values_symmetric(H)[1];
  };
  refine_on_face_d(metric, best_t, best_sigma, make_rat(2, grid_per_axis), 8, 4);
  if (best_sigma < 0.0) {
    rep.condition_rank = Verdict::fails;
    rep.witness_rank = best_t;
    rep.exact_witness_rank = exact_rank(c.weighted_hessian(best_t, c.x0()));
    rep.min_sigma_nminus1 = 0.0;
    return rep;
  }

  rep.witness_rank = best_t;
  rep.min_sigma_nminus1 = best_sigma;
  const double tol = 1e-8 * std::max(maxnorm, 1e-300);
  rep.condition_rank = (best_sigma > tol) ? Verdict::holds : Verdict::undecided;
  return rep;
}

CurvatureReport cover_assignment(const ChartSpec& c, int grid_per_axis) {
  CurvatureReport rep = check_condition_rank(c, grid_per_axis);
  if (rep.condition_rank != Verdict::holds)
    throw std::domain_error("cover_assignment: rank condition does not hold");

  const int n = c.n();
  auto grid = sphere_grid(c.R(), grid_per_axis);
  rep.cover.reserve(grid.size());
  rep.cover_ok = true;
  bool first = true;
  double min_margin = 0.0;
  for (const auto& t : grid) {
    RatMat H = c.weighted_hessian(t, c.x0());
    CoverSample s;
    s.t = t;
    Rat best_abs(-1);
    for (int i = 0; i < n; ++i) {
      Rat m = abs_rat(principal_minor_det(H, i));
      if (m > best_abs) {  // strict: smallest index wins ties
        best_abs = m;
        s.nu = i + 1;
      }
    }
    s.margin = best_abs.get_d();
    if (best_abs == 0) {
      rep.cover_ok = false;
      s.nu = 0;
    }
    if (first || s.margin < min_margin) {
      min_margin = s.margin;
      first = false;
    }
    rep.cover.push_back(std::move(s));
  }
  rep.min_cover_margin = min_margin;
  return rep;
}

HessianBoxBounds hessian_box_bounds(const ChartSpec& c, int nu, const Rat& box_radius,
                                    const std::vector<std::vector<Rat>>& t_samples,
                                    int x_grid_per_axis) {
  if (nu < 1 || nu > c.n()) throw std::out_of_range("hessian_box_bounds: nu out of range");
  if (box_radius < 0) throw std::invalid_argument("hessian_box_bounds: negative box radius");
  if (box_radius > 2 * c.epsilon0())
    throw std::invalid_argument("hessian_box_bounds: box exceeds 2*epsilon0");
  if (t_samples.empty()) throw std::invalid_argument("hessian_box_bounds: no t samples");

  HessianBoxBounds out;
  out.box_radius = box_radius;
  {
    std::ostringstream ss;
    ss << t_samples.size() << " direction sample(s) on |t|_inf = 1";
    out.t_set_description = ss.str();
  }

  const int n = c.n();
  std::vector<std::vector<Rat>> axis_points(n);
  for (int i = 0; i < n; ++i) {
    if (box_radius == 0 || x_grid_per_axis == 0) {
      axis_points[i] = {c.x0()[i]};
    } else {
      for (int k = 0; k <= x_grid_per_axis; ++k)
        axis_points[i].push_back(c.x0()[i] - box_radius +
                                 Rat(2 * k) * box_radius / x_grid_per_axis);
    }
  }

  bool first = true;
  Rat rmin, rmax;
  std::vector<int> idx(n, 0);
  std::vector<Rat> x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = axis_points[i][idx[i]];
    for (const auto& t : t_samples) {
      RatMat H = c.weighted_hessian(t, x);
      Rat m = abs_rat(principal_minor_det(H, nu - 1));
      if (first) {
        rmin = rmax = m;
        first = false;
      } else {
        if (m < rmin) rmin = m;
        if (m > rmax) rmax = m;
      }
    }
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[axis] < static_cast<int>(axis_points[axis].size())) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }

  out.raw_min = rmin.get_d();
  out.raw_max = rmax.get_d();
  out.c1 = 0.9 * out.raw_min;
  out.c2 = 1.1 * out.raw_max;
  out.valid = rmin > 0;
  return out;
}

CurvatureReport analyze_curvature(const ChartSpec& c, int grid_per_axis) {
  CurvatureReport full = check_condition_full(c, grid_per_axis);
  CurvatureReport rank = check_condition_rank(c, grid_per_axis);
  full.condition_rank = rank.condition_rank;
  full.witness_rank = rank.witness_rank;
  full.min_sigma_nminus1 = rank.min_sigma_nminus1;
  full.exact_witness_rank = rank.exact_witness_rank;
  if (rank.condition_rank == Verdict::holds) {
    CurvatureReport cov = cover_assignment(c, grid_per_axis);
    full.cover = std::move(cov.cover);
    full.min_cover_margin = cov.min_cover_margin;
    full.cover_ok = cov.cover_ok;
  }
  return full;
}

namespace {

json rat_vec_json(const std::vector<Rat>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(rat_to_string(r));
  return a;
}

std::string fmt12(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

}  // namespace

std::string curvature_report_to_json(const CurvatureReport& r) {
  json j;
  j["condition_full"] = to_string(r.condition_full);
  j["witness_full"] = rat_vec_json(r.witness_full);
  j["min_abs_det"] = fmt12(r.min_abs_det);
  j["full_exact"] = r.full_exact;
  j["condition_rank"] = to_string(r.condition_rank);
  j["witness_rank"] = rat_vec_json(r.witness_rank);
  j["min_sigma_nminus1"] = fmt12(r.min_sigma_nminus1);
  if (r.exact_witness_rank >= 0) j["exact_witness_rank"] = r.exact_witness_rank;
  j["grid_resolution"] = r.grid_resolution;
  if (!r.cover.empty()) {
    j["cover_ok"] = r.cover_ok;
    j["min_cover_margin"] = fmt12(r.min_cover_margin);
    json samples = json::array();
    for (const auto& s : r.cover) {
      json js;
      js["t"] = rat_vec_json(s.t);
      js["nu"] = s.nu;
      js["margin"] = fmt12(s.margin);
      samples.push_back(js);
    }
    j["cover"] = samples;
  }
  return j.dump(2);
}

}  // namespace rpnm
