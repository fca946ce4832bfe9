// Shared grid primitives for the estimator and the annealing search. Both
// sides must price a label edge identically, so the edge-mass inputs and the
// windowed normal estimate live here rather than in either translation unit.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tripod/cluster.hpp"
#include "tripod/gauss1d.hpp"

namespace tripod {
namespace detail {

// Cyclic-pair index and orientation sign for the ordered label pair (la, lb):
// +1 when (la, lb) matches the pair's (i, j) order, -1 when reversed.
inline std::pair<int, double> pair_of(int la, int lb) {
  for (int p = 0; p < 3; ++p) {
    const auto& [i, j] = kCyclicPairs[p];
    if (la == i && lb == j) return {p, 1.0};
    if (la == j && lb == i) return {p, -1.0};
  }
  throw std::logic_error("pair_of: labels must be distinct values in 1..3");
}

// Radial weight for the label-centroid normal estimate, in pixel units. A
// radially symmetric window keeps the centroid difference parallel to the
// true normal for a straight cut at any angle; a square window would bias
// oblique normals toward the axes and the staircase correction would inherit
// that bias.
constexpr double kNormalSigma = 1.5;
constexpr double kNormalCutoff = 4.5;

// Gaussian mass of each 1D grid interval.
inline std::vector<double> interval_masses(double extent, int resolution) {
  const double h = 2.0 * extent / resolution;
  std::vector<double> cdf(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    cdf[i] = gauss::cdf(-extent + i * h);
  }
  std::vector<double> w(resolution);
  for (int i = 0; i < resolution; ++i) {
    w[i] = cdf[i + 1] - cdf[i];
  }
  return w;
}

// Gaussian density along each 1D grid line.
inline std::vector<double> grid_line_pdf(double extent, int resolution) {
  const double h = 2.0 * extent / resolution;
  std::vector<double> pdf(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    pdf[i] = gauss::pdf(-extent + i * h);
  }
  return pdf;
}

// Window weights tabulated over 4*d^2, which is an integer for every pixel
// offset from an edge midpoint (midpoints sit on half-integer coordinates).
inline const std::array<double, 82>& radial_weights() {
  static const std::array<double, 82> table = [] {
    std::array<double, 82> t{};
    for (int q = 0; q < 82; ++q) {
      t[q] = std::exp(-q / (8.0 * kNormalSigma * kNormalSigma));
    }
    return t;
  }();
  return table;
}

// Unit normal at the label edge between adjacent pixels a and b, pointing
// from the a-label side into the b-label side: the difference of the two
// label centroids under a truncated Gaussian window centered on the edge
// midpoint, with the raw a->b axis as fallback for degenerate windows.
inline void edge_normal(const GridCluster& c, int ax, int ay, int bx, int by,
                        double& nx, double& ny) {
  const int n = c.resolution;
  const int la = c.labels[static_cast<std::size_t>(ay) * n + ax];
  const int lb = c.labels[static_cast<std::size_t>(by) * n + bx];
  const int cx2 = ax + bx;
  const int cy2 = ay + by;
  const int x0 = std::max(0, (cx2 - 9 + 1) / 2);
  const int x1 = std::min(n - 1, (cx2 + 9) / 2);
  const int y0 = std::max(0, (cy2 - 9 + 1) / 2);
  const int y1 = std::min(n - 1, (cy2 + 9) / 2);
  const auto& weights = radial_weights();
  double sax = 0.0, say = 0.0, sbx = 0.0, sby = 0.0;
  double na = 0.0, nb = 0.0;
  for (int jy = y0; jy <= y1; ++jy) {
    const int dy2 = 2 * jy - cy2;
    for (int jx = x0; jx <= x1; ++jx) {
      const int dx2 = 2 * jx - cx2;
      const int q = dx2 * dx2 + dy2 * dy2;
      if (q > 81) continue;
      const int l = c.labels[static_cast<std::size_t>(jy) * n + jx];
      if (l != la && l != lb) continue;
      const double w = weights[q];
      if (l == la) {
        sax += w * jx;
        say += w * jy;
        na += w;
      } else {
        sbx += w * jx;
        sby += w * jy;
        nb += w;
      }
    }
  }
  nx = sbx / nb - sax / na;
  ny = sby / nb - say / na;
  const double len = std::hypot(nx, ny);
  if (len < 1e-12) {
    nx = bx - ax;
    ny = by - ay;
  } else {
    nx /= len;
    ny /= len;
  }
}

// Staircase-corrected Gaussian length carried by one label edge.
inline double corrected_edge_mass(const GridCluster& c, int ax, int ay, int bx,
                                  int by, double raw_mass) {
  double nx = 0.0, ny = 0.0;
  edge_normal(c, ax, ay, bx, by, nx, ny);
  return raw_mass / (std::abs(nx) + std::abs(ny));
}

}  // namespace detail
}  // namespace tripod
