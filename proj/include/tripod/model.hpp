#pragma once

#include <array>
#include <utility>

#include "tripod/e_plane.hpp"

namespace tripod {

// A target volume triple on the simplex: entries >= 0, summing to 1.
class SimplexVolume {
 public:
  static SimplexVolume from_triple(double v1, double v2, double v3);

  const std::array<double, 3>& v() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  double min_entry() const;
  double max_entry() const;
  bool interior() const { return min_entry() > 0.0; }

 private:
  explicit SimplexVolume(std::array<double, 3> v) : v_(v) {}
  std::array<double, 3> v_;
};

struct InterfaceAreas {
  double a12 = 0.0;
  double a23 = 0.0;
  double a31 = 0.0;
  double total() const { return a12 + a23 + a31; }
};

// Gaussian length of the (i,j) interface of the tripod with vertex x:
// pdf(<x,n_ij>) * (1 - cdf(<x,t_ij>)).
double interface_area(const PlanePoint& x, int i, int j);
InterfaceAreas interface_areas(const PlanePoint& x);

// Gaussian measure of cell i (1-based) of the tripod at x: the wedge cut by
// the two half-planes {<z,n_ij> < <x,n_ij>}, j != i, reduced to a 1D
// integral with the inner CDF in closed form. Absolute accuracy tol, with
// tol in [1e-12, 1e-6]. Throws NumericalError if the quadrature cannot
// certify tol.
double cell_measure(const PlanePoint& x, int i, double tol);

// Product lower bound and min upper bound for cell_measure(x, i).
std::pair<double, double> measure_bounds(const PlanePoint& x, int i);

// The three cell measures, renormalized to sum exactly to 1. The distance
// of the raw sum from 1 (at most ~3*tol) is written to *renorm if given.
SimplexVolume volume_map(const PlanePoint& x, double tol = 1e-11,
                         double* renorm = nullptr);

// L_A = sum A_ij (e_i - e_j)(e_i - e_j)^T; positive definite on E whenever
// at least two areas are positive.
EOperator area_laplacian(const InterfaceAreas& a);

// Differential of volume_map: -(1/sqrt(2)) L_A at x.
EOperator volume_jacobian(const PlanePoint& x);

// Damped Newton inversion of volume_map, started at 0, solving on E only.
// Requires min v_i >= 1e-6 and tol >= 1e-10; throws SolverError after 100
// iterations without convergence.
PlanePoint invert_volume_map(const SimplexVolume& v, double tol = 1e-10);

// The tripod profile: total interface area at invert_volume_map(v) for
// interior v, and the single-bubble value at max v_i on the boundary strip
// min v_i < 1e-6.
double model_profile(const SimplexVolume& v);

// Gradient of the profile as a covector on E: invert_volume_map(v)/sqrt(2).
PlanePoint model_profile_gradient(const SimplexVolume& v);

// Hessian of the profile: minus the inverse (on E) of L_A at the inverted
// vertex; negative definite on the interior.
EOperator model_profile_hessian(const SimplexVolume& v);

// |(-trace of the inverse Hessian on E) - 2 * model_profile(v)|.
double trace_identity_residual(const SimplexVolume& v);

// Weighted mean curvature of the (i,j) interface: -<x, n_ij>; equals
// lambda_i - lambda_j for lambda = x/sqrt(2).
double weighted_mean_curvature(const PlanePoint& x, int i, int j);

// Profile lower bound sqrt(K) * model_profile(v) for a K-strongly-convex
// potential; rejects K <= 0.
double strongly_convex_lower_bound(double K, const SimplexVolume& v);

}  // namespace tripod
