#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "detphase/spectrum.hpp"

namespace testing {

using detphase::cplx;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx random_offaxis(double lo = 0.2, double hi = 4.0) {
  const double re = uniform(lo, hi) * (uniform(0, 1) < 0.5 ? -1.0 : 1.0);
  return {re, uniform(-hi, hi)};
}

/// Sorts (Im, Re) for order-independent comparisons of value lists.
inline std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  return v;
}

/// Max over `a` of the distance to the nearest unused element of `b`.
inline double greedy_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (cplx x : a) {
    double best = 1e300;
    std::size_t pick = b.size();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(b[j] - x) < best) {
        best = std::abs(b[j] - x);
        pick = j;
      }
    if (pick == b.size()) return 1e300;
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

/// exp(βA) via Eigen's Padé matrix exponential (constant-coefficient oracle).
inline Eigen::Matrix2cd expm(const Eigen::Matrix2cd& A, double beta) {
  Eigen::Matrix2cd scaled = A * beta;
  return scaled.exp();
}

}  // namespace testing
