#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tripod/e_plane.hpp"
#include "tripod/model.hpp"

namespace tripod {

// Execution policy for the grid kernels. serial is the reference
// implementation; parallel partitions work by grid row across OpenMP threads
// and folds the per-row partial sums in row order, so both policies produce
// bit-identical results.
enum class Execution { serial, parallel };

// Pixelization of a labeled 3-cluster on the window [-R,R]^2 in the (u1,u2)
// plane basis. Pixel (ix, iy) covers the cell between grid lines
// -R + ix*h and -R + (ix+1)*h horizontally (h = 2R/resolution), analogously
// vertically; storage is row-major, index iy*resolution + ix.
struct GridCluster {
  double extent = 0.0;
  int resolution = 0;
  std::vector<std::uint8_t> labels;
  std::vector<double> weights;

  double cell_size() const { return 2.0 * extent / resolution; }
  // Pixel-center coordinate along either axis.
  double center(int i) const { return -extent + (i + 0.5) * cell_size(); }
};

// Per-label Gaussian mass of a grid cluster. The window complement is
// reported on its own and never folded into a cell.
struct GridMeasures {
  std::array<double, 3> inside = {0.0, 0.0, 0.0};
  double outside = 0.0;
};

// Interval 3-cluster on the line: the cells are (-inf,a), (a,b), (b,inf),
// relabeled so interval k holds cell labelOrder[k].
struct OneDimCluster {
  double a = 0.0;
  double b = 0.0;
  std::array<int, 3> labelOrder = {1, 2, 3};

  std::array<double, 3> measures() const;
  double perimeter() const;
};

// Per-pair interface summary: total weighted interface areas, average unit
// normals, and the moment operators built from the same weighted normal data.
// Normals and the column space of M are expressed in the (u1,u2) basis;
// avgNormals[p] belongs to kCyclicPairs[p] and is oriented from cell i into
// cell j (zero when the interface is empty and |avgNormals[p]| <= 1 always).
// M = sum A_ij (e_i - e_j) nbar_ij^T maps plane vectors to cell space, and
// N = sum A_ij nbar_ij nbar_ij^T.
struct InterfaceStats {
  InterfaceAreas areas = {0.0, 0.0, 0.0};
  std::array<Eigen::Vector2d, 3> avgNormals = {
      Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  Eigen::Matrix<double, 3, 2> M = Eigen::Matrix<double, 3, 2>::Zero();
  Eigen::Matrix2d N = Eigen::Matrix2d::Zero();
};

// Result of the grid perimeter estimator: the total weighted perimeter
// (sum of the per-pair areas) together with the interface statistics.
struct PerimeterEstimate {
  double perimeter = 0.0;
  InterfaceStats stats;
};

// Labels the window pixels by the cell partition with vertex x: pixel centers
// are assigned argmax_c <z - x, e_c>, ties toward the smallest index.
// Requires R in [4,10] and resolution in [64,4096].
GridCluster make_tripod_grid(const PlanePoint& x, double R, int resolution,
                             Execution exec = Execution::parallel);

GridMeasures grid_measures(const GridCluster& c,
                           Execution exec = Execution::parallel);

// Estimates the weighted interface length per pair by summing the exact
// Gaussian mass of label-changing pixel edges, corrected for the staircase
// overcount: each cut edge is scaled by 1/|nu|_1 for the local unit normal nu
// estimated from the difference of the two label centroids in a window around
// the edge. Raw axis-aligned cut counting overestimates an interface of unit
// normal nu by the factor |nu|_1, so the corrected sum converges to the true
// weighted length.
PerimeterEstimate grid_perimeter(const GridCluster& c,
                                 Execution exec = Execution::parallel);

// Interface statistics of the exact cell partition with vertex x: constant
// normals along three straight rays.
InterfaceStats tripod_stats(const PlanePoint& x);

// Interface statistics of a threshold cluster lifted to the plane along the
// unit direction at the given angle: all normals colinear.
InterfaceStats one_dim_stats(const OneDimCluster& c, double angle);

// Minimum eigenvalue of N - M^T L_A^{-1} M on the plane. Nonnegative up to
// roundoff for statistics assembled from a common weighted normal set, and
// zero exactly when one linear map sends every e_i - e_j to the matching
// average normal (constant-normal interfaces). Requires at least two
// non-vanishing interfaces so that L_A is invertible on the plane.
double matrix_cs_gap(const InterfaceStats& stats);

// Numerical rank of M at the given absolute singular-value threshold:
// 2 for tripods, 1 for threshold clusters, 0 when all interfaces are empty.
int dichotomy_rank(const InterfaceStats& stats, double tol);

// Threshold competitor with the same volume triple: cells are the intervals
// below Phi_inv(v1), between, and above Phi_inv(v1+v2), in identity label
// order. Its perimeter pdf(a)+pdf(b) strictly exceeds the cell-partition
// profile at interior volumes.
OneDimCluster one_dim_competitor(const SimplexVolume& v);

// Binary serialization: magic "GBC1", extent as little-endian f64, resolution
// as little-endian u32, then row-major one-byte labels. Weights are not
// stored; the loader rebuilds them from extent and resolution.
void save_grid(const GridCluster& c, std::ostream& out);
GridCluster load_grid(std::istream& in);

// Plain-text export with one "x,y,label" row per pixel center.
void save_grid_csv(const GridCluster& c, std::ostream& out);

}  // namespace tripod
