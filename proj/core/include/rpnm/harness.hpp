#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpnm/chart.hpp"
#include "rpnm/counting.hpp"
#include "rpnm/rational.hpp"

namespace rpnm {

enum class Regime { above_threshold, below_threshold };

std::string to_string(Regime r);

/// The two error-bound shapes of the main theorem, selected by comparing
/// delta against Q^{-(n-1)/(n+2R-1)}:
///   above: delta^((R-1)(n-1)/(n+1)) * Q^(n + 2/(n+1)) * E_{n-1}(Q)
///   below: Q^(n - ((R-1)n + 1 - 3R)/(n+2R-1)) * E_{n-1}(Q)
/// The E factor constants are existence-only and reported as 1.
struct TheoremBound {
  int n = 0, R = 0;
  Regime regime = Regime::above_threshold;
  Rat delta_exponent;  // 0 below the threshold
  Rat q_exponent;
  std::string log_factor;  // "exp(c*sqrt(log Q))" for n=3, "(log Q)^c" for n>=4
};

/// Q^{-(n-1)/(n+2R-1)}.
double regime_threshold(int n, int R, long Q);

/// Exact regime selection: delta >= Q^{-p/s} iff delta^s Q^p >= 1.
TheoremBound theorem_bound(int n, int R, long Q, const Rat& delta);

/// Least-squares slope of log(value) against log(Q). Requires >= 3 pairs with
/// positive values.
double fit_exponent(const std::vector<std::pair<double, double>>& pairs);

/// Power-law delta schedule delta(Q) ~= A * Q^(-beta), rounded to an exact
/// dyadic rational so the counting predicate stays decidable.
struct DeltaSchedule {
  Rat A = Rat(1);
  Rat beta = Rat(0);

  Rat delta_at(long Q) const;  // dyadic approximation, clamped to [0, 1/2]
};

struct SweepConfig {
  ChartSpec chart;
  std::optional<BumpWeight> weight;
  std::vector<long> q_values;
  DeltaSchedule schedule;
  int threads = 1;
};

struct SweepRow {
  CountResult result;
  TheoremBound bound;
  Rat delta;  // the exact rational actually used
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (Q, delta)
  double fitted_error_exponent = 0.0;  // slope of |N_w - main| vs Q
  double fitted_count_exponent = 0.0;  // slope of N_w vs Q
  bool error_fit_valid = false;
  bool count_fit_valid = false;
};

SweepTable sweep(const SweepConfig& config);

struct SerreProbe {
  std::vector<std::pair<long, long long>> counts;  // (Q, n_on_manifold)
  double fitted_slope = 0.0;
  double corollary_exponent = 0.0;  // n - ((R-1)n + 1 - 3R)/(n + 2R - 1)
  double trivial_exponent = 0.0;    // n
};

/// delta = 0 counts over the Q list with the growth-exponent comparison.
SerreProbe serre_probe(const ChartSpec& c, const std::vector<long>& q_values,
                       int threads = 1);

/// CSV row helpers (17 significant digits; lossless round trip).
std::string count_result_csv_header();
std::string count_result_csv_row(const CountResult& r);
CountResult count_result_from_csv_row(const std::string& line);

std::string sweep_csv(const SweepTable& t);
std::string sweep_json(const SweepTable& t);

}  // namespace rpnm
