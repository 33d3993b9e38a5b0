#pragma once

namespace rpnm {

/// Kahan compensated accumulator. Summation order is part of every weighted
/// count's contract, so totals are reproducible to the last bit.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;

  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace rpnm
