#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "reeb321/types.hpp"

namespace reeb::oracle {

// Exact spectrum of the discrete operator for constant S, mode by mode.
inline std::vector<double> fourier_spectrum(const Mat2& S, int N) {
  std::vector<double> ev;
  const double m = -(S(0, 0) + S(1, 1)) / 2.0;
  for (int n = 0; n < N; ++n) {
    const double w = N * (8.0 * std::sin(kTwoPi * n / N) - std::sin(2.0 * kTwoPi * n / N)) / 6.0;
    const double r = std::sqrt(std::pow((S(0, 0) - S(1, 1)) / 2.0, 2) + S(0, 1) * S(0, 1) + w * w);
    ev.push_back(m - r);
    ev.push_back(m + r);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return HUGE_VAL;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Closed-form periods of the three special orbits.
inline double period_P1(double e) { return kPi * (1.0 - 7.0 * std::pow(e, 4) / 48.0); }
inline double period_P2(double) { return kPi; }
inline double period_P3(double e) { return kPi * (1.0 + 8.0 * std::pow(e, 4) / 3.0); }

}  // namespace reeb::oracle
