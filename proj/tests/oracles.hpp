// Independent reference implementations used by the tests. These must not
// share code paths with the library routines they check: the quantile oracle
// inverts the CDF by plain bisection, the CDF oracle goes through erf instead
// of erfc, and the derivative oracles are bare central differences.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>

#include "tripod/e_plane.hpp"
#include "tripod/gauss1d.hpp"

namespace oracle {

// Normal CDF through erf, the textbook form.
inline double cdf_via_erf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

// Invert the library CDF by bisection on [-40, 40]; 200 halvings take the
// bracket far below double spacing.
inline double bisect_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tripod::gauss::cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Plain central differences; callers pick the step.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_second_diff(const std::function<double(double)>& f,
                                  double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Box-Muller pair from explicit engine bits, so the sample stream does not
// depend on library distribution internals.
inline std::pair<double, double> gauss_pair(std::mt19937_64& rng) {
  const double u1 = 1.0 - (rng() >> 11) * 0x1p-53;  // (0, 1]
  const double u2 = (rng() >> 11) * 0x1p-53;        // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

// Monte-Carlo estimate of the Gaussian measure of cell `i` (1-based) of the
// tripod at x: the fraction of Gaussian samples z on the plane whose largest
// component of z - x sits at index i (smallest index wins ties).
inline double mc_cell_measure(const tripod::PlanePoint& x, int i, long n,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& xc = x.coords3();
  long hits = 0;
  for (long s = 0; s < n; ++s) {
    const auto [p, q] = gauss_pair(rng);
    std::array<double, 3> z;
    for (int c = 0; c < 3; ++c) {
      z[c] = p * tripod::kU1[c] + q * tripod::kU2[c] - xc[c];
    }
    int arg = 0;
    if (z[1] > z[0]) arg = 1;
    if (z[2] > z[arg]) arg = 2;
    if (arg == i - 1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

// Standard error of a Monte-Carlo proportion.
inline double mc_sigma(double p, long n) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(n));
}

// Apply the index permutation `perm` (0-based): result[c] = x[perm[c]].
inline tripod::PlanePoint permute_point(const tripod::PlanePoint& x,
                                        const std::array<int, 3>& perm) {
  return tripod::PlanePoint::from_coords3(x[perm[0]], x[perm[1]], x[perm[2]]);
}

inline const std::array<std::array<int, 3>, 6> kAllPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace oracle
