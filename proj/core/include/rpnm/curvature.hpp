#pragma once

#include <string>
#include <vector>

#include "rpnm/chart.hpp"
#include "rpnm/exact_linalg.hpp"

namespace rpnm {

enum class Verdict { holds, fails, undecided };

std::string to_string(Verdict v);

/// Per-sample cover datum: the index nu maximizing |theta_nu(t)| and the
/// margin max_i |theta_i(t)|.
struct CoverSample {
  std::vector<Rat> t;
  int nu = 0;  // 1-based
  double margin = 0.0;
};

struct CurvatureReport {
  Verdict condition_full = Verdict::undecided;
  std::vector<Rat> witness_full;       // direction where |det| is minimal
  double min_abs_det = 0.0;            // refined minimum of |det H_{t.f}(x0)|
  bool full_exact = false;             // decided by root isolation (R<=2)

  Verdict condition_rank = Verdict::undecided;
  std::vector<Rat> witness_rank;       // direction where sigma_{n-1} is minimal
  double min_sigma_nminus1 = 0.0;
  int exact_witness_rank = -1;         // rank at an exact failing witness, if any

  int grid_resolution = 0;

  std::vector<CoverSample> cover;
  double min_cover_margin = 0.0;
  bool cover_ok = false;               // false if some sample had all minors zero
};

struct HessianBoxBounds {
  double c1 = 0.0;  // 0.9 * observed min |minor|
  double c2 = 0.0;  // 1.1 * observed max |minor|
  double raw_min = 0.0;
  double raw_max = 0.0;
  Rat box_radius;
  std::string t_set_description;
  bool valid = false;  // false when the minimum hit zero
};

/// det of H_{t.f}(x0) with row i and column i deleted (i is 1-based, matching
/// the theta_i functions). Exact for rational t.
Rat principal_minor(const ChartSpec& c, const std::vector<Rat>& t, int i);

/// Scans det H_{t.f}(x0) over the faces of the L-infinity unit sphere
/// (one representative per antipodal pair), refines around the minimal |det|
/// sample, and for R <= 2 decides exactly by univariate root isolation.
CurvatureReport check_condition_full(const ChartSpec& c, int grid_per_axis);

/// Scans singular values of H_{t.f}(x0) over the same sphere grid; fails only
/// on an exact rational witness with rank <= n-2 (fraction-free elimination).
CurvatureReport check_condition_rank(const ChartSpec& c, int grid_per_axis);

/// Assigns every sphere sample to the principal minor of largest magnitude.
/// Requires the rank condition; throws std::domain_error if it does not hold.
CurvatureReport cover_assignment(const ChartSpec& c, int grid_per_axis);

/// min/max of |theta_nu| over a tensor x-grid in the box x0 +- box_radius and
/// the supplied t samples, with 0.9/1.1 safety factors applied.
HessianBoxBounds hessian_box_bounds(const ChartSpec& c, int nu, const Rat& box_radius,
                                    const std::vector<std::vector<Rat>>& t_samples,
                                    int x_grid_per_axis = 4);

/// Full report: both conditions plus the cover when the rank condition holds.
CurvatureReport analyze_curvature(const ChartSpec& c, int grid_per_axis);

/// The rational sphere grid used by the checks (exposed for tests and for
/// hessian_box_bounds callers). Faces t_i = +1, remaining coordinates on a
/// uniform (grid_per_axis+1)-point grid of [-1, 1].
std::vector<std::vector<Rat>> sphere_grid(int R, int grid_per_axis);

std::string curvature_report_to_json(const CurvatureReport& r);

}  // namespace rpnm
