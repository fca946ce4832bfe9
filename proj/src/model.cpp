#include "tripod/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tripod/errors.hpp"
#include "tripod/gauss1d.hpp"

namespace tripod {
namespace {

// Quadrature window: the density below -8.5 carries less than 1e-17 mass,
// far below the tightest permitted tolerance.
constexpr double kTrunc = 8.5;
constexpr double kTwoOverSqrt3 = 1.15470053837925152902;
constexpr double kSqrt3Over2 = 1.22474487139158904910;
constexpr double kInteriorCutoff = 1e-6;

// P(U <= cj, V <= ck) for standard normals with correlation 1/2, as the 1D
// integral of pdf(s) * cdf((ck - s/2) / (sqrt(3)/2)) over s <= cj.
double wedge_probability(double cj, double ck, double tol) {
  const double hi = std::min(cj, kTrunc);
  if (hi <= -kTrunc) return 0.0;
  const auto f = [ck](double s) {
    return gauss::pdf(s) * gauss::cdf((ck - 0.5 * s) * kTwoOverSqrt3);
  };
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, -kTrunc, hi, 12, tol, &err);
  if (!(err <= tol)) {
    throw NumericalError("cell_measure: quadrature error estimate " +
                             std::to_string(err) + " above requested " +
                             std::to_string(tol),
                         err);
  }
  return val;
}

void check_cell_index(int i) {
  if (i < 1 || i > 3) {
    throw std::domain_error("cell index must be 1, 2 or 3");
  }
}

}  // namespace

SimplexVolume SimplexVolume::from_triple(double v1, double v2, double v3) {
  if (!(v1 >= 0.0 && v2 >= 0.0 && v3 >= 0.0)) {
    throw std::domain_error("SimplexVolume: entries must be nonnegative");
  }
  if (!(std::abs(v1 + v2 + v3 - 1.0) <= 1e-12)) {
    throw std::domain_error("SimplexVolume: entries must sum to 1");
  }
  return SimplexVolume({v1, v2, v3});
}

double SimplexVolume::min_entry() const {
  return std::min(v_[0], std::min(v_[1], v_[2]));
}

double SimplexVolume::max_entry() const {
  return std::max(v_[0], std::max(v_[1], v_[2]));
}

double interface_area(const PlanePoint& x, int i, int j) {
  const FramePair f = frame(i, j);
  return gauss::pdf(dot(x, f.n)) * gauss::cdf_upper(dot(x, f.t));
}

InterfaceAreas interface_areas(const PlanePoint& x) {
  return {interface_area(x, 1, 2), interface_area(x, 2, 3),
          interface_area(x, 3, 1)};
}

double cell_measure(const PlanePoint& x, int i, double tol) {
  check_cell_index(i);
  if (!(tol >= 1e-12 && tol <= 1e-6)) {
    throw std::domain_error("cell_measure: tol must lie in [1e-12, 1e-6]");
  }
  const int j = i % 3 + 1;
  const int k = j % 3 + 1;
  const double cj = (x[j - 1] - x[i - 1]) * kInvSqrt2;
  const double ck = (x[k - 1] - x[i - 1]) * kInvSqrt2;
  return wedge_probability(cj, ck, tol);
}

std::pair<double, double> measure_bounds(const PlanePoint& x, int i) {
  check_cell_index(i);
  const int j = i % 3 + 1;
  const int k = j % 3 + 1;
  const double tij = gauss::cdf_upper((x[i - 1] - x[j - 1]) * kInvSqrt2);
  const double tik = gauss::cdf_upper((x[i - 1] - x[k - 1]) * kInvSqrt2);
  // A single coordinate of the plane Gaussian has variance 2/3, so the
  // half-plane {z_i > x_i} containing the cell carries mass
  // cdf_upper(x_i * sqrt(3/2)).
  const double ti = gauss::cdf_upper(x[i - 1] * kSqrt3Over2);
  return {tij * tik, std::min(ti, std::min(tij, tik))};
}

SimplexVolume volume_map(const PlanePoint& x, double tol, double* renorm) {
  const double m1 = cell_measure(x, 1, tol);
  const double m2 = cell_measure(x, 2, tol);
  const double m3 = cell_measure(x, 3, tol);
  const double sum = m1 + m2 + m3;
  if (renorm != nullptr) *renorm = std::abs(sum - 1.0);
  const double v1 = m1 / sum;
  const double v2 = m2 / sum;
  // Closing against the compound v1 + v2 keeps the left-to-right sum of the
  // three entries at exactly 1.0.
  return SimplexVolume::from_triple(v1, v2, std::max(0.0, 1.0 - (v1 + v2)));
}

EOperator area_laplacian(const InterfaceAreas& a) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  const std::array<double, 3> weights = {a.a12, a.a23, a.a31};
  for (int p = 0; p < 3; ++p) {
    const auto [i, j] = kCyclicPairs[p];
    Eigen::Vector3d d = Eigen::Vector3d::Zero();
    d[i - 1] = 1.0;
    d[j - 1] = -1.0;
    m += weights[p] * d * d.transpose();
  }
  return EOperator::from_m33(m);
}

EOperator volume_jacobian(const PlanePoint& x) {
  const EOperator la = area_laplacian(interface_areas(x));
  return EOperator::from_m33(-kInvSqrt2 * la.m33);
}

namespace {

// Infinity norm of the normalized cell-measure triple minus v, with the
// quadrature pushed well below the public cell_measure tolerance range.
double inversion_residual(const PlanePoint& x, const SimplexVolume& v,
                          double quad_tol, std::array<double, 3>* diff) {
  std::array<double, 3> m;
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1;
    const int k = j % 3 + 1;
    const double cj = (x[j - 1] - x[i - 1]) * kInvSqrt2;
    const double ck = (x[k - 1] - x[i - 1]) * kInvSqrt2;
    m[i - 1] = wedge_probability(cj, ck, quad_tol);
  }
  const double sum = m[0] + m[1] + m[2];
  double res = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = m[i] / sum - v[i];
    if (diff != nullptr) (*diff)[i] = d;
    res = std::max(res, std::abs(d));
  }
  return res;
}

}  // namespace

PlanePoint invert_volume_map(const SimplexVolume& v, double tol) {
  if (!(tol >= 1e-10)) {
    throw std::domain_error("invert_volume_map: tol must be >= 1e-10");
  }
  if (!(v.min_entry() >= kInteriorCutoff)) {
    throw std::domain_error(
        "invert_volume_map: volumes closer than 1e-6 to the simplex boundary "
        "are outside the inversion domain");
  }
  // The Jacobian degenerates as interfaces vanish, so the vertex error can sit
  // orders of magnitude above the volume residual near the simplex corners.
  // Quadrature far below tol plus polishing until the residual stalls keeps
  // the vertex pinned near the noise floor instead of at tol times the
  // condition number.
  const double quad_tol = 1e-14;
  PlanePoint x;
  std::array<double, 3> diff;
  double res = inversion_residual(x, v, quad_tol, &diff);
  for (int iter = 0; iter < 100; ++iter) {
    // Newton direction, solved in the 2D basis so the (1,1,1) direction is
    // never touched.
    const Eigen::Matrix2d j = volume_jacobian(x).m22;
    const PlanePoint d3 = PlanePoint::from_coords3(diff[0], diff[1], diff[2]);
    const auto [r1, r2] = d3.coords2();
    const Eigen::Vector2d step = j.partialPivLu().solve(Eigen::Vector2d(r1, r2));
    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60 && !improved; ++halving) {
      const PlanePoint trial = x - PlanePoint::from_coords2(
                                       scale * step[0], scale * step[1]);
      std::array<double, 3> trial_diff;
      const double trial_res = inversion_residual(trial, v, quad_tol, &trial_diff);
      if (trial_res < res) {
        x = trial;
        res = trial_res;
        diff = trial_diff;
        improved = true;
      } else {
        scale *= 0.5;
      }
    }
    if (!improved) {
      if (res <= tol) return x;
      throw SolverError("invert_volume_map: damping stalled", x.coords3(), res);
    }
    if (res <= tol && scale * step.norm() <= 1e-12) return x;
  }
  throw SolverError("invert_volume_map: no convergence in 100 iterations",
                    x.coords3(), res);
}

double model_profile(const SimplexVolume& v) {
  if (v.min_entry() < kInteriorCutoff) {
    return gauss::single_bubble_profile(v.max_entry());
  }
  return interface_areas(invert_volume_map(v)).total();
}

PlanePoint model_profile_gradient(const SimplexVolume& v) {
  return kInvSqrt2 * invert_volume_map(v);
}

EOperator model_profile_hessian(const SimplexVolume& v) {
  const PlanePoint x = invert_volume_map(v);
  const EOperator la = area_laplacian(interface_areas(x));
  return EOperator::from_m22(-la.m22.inverse());
}

double trace_identity_residual(const SimplexVolume& v) {
  const EOperator h = model_profile_hessian(v);
  const double lhs = -h.m22.inverse().trace();
  return std::abs(lhs - 2.0 * model_profile(v));
}

double weighted_mean_curvature(const PlanePoint& x, int i, int j) {
  return -dot(x, frame(i, j).n);
}

double strongly_convex_lower_bound(double K, const SimplexVolume& v) {
  if (!(K > 0.0)) {
    throw std::domain_error("strongly_convex_lower_bound: K must be positive");
  }
  return std::sqrt(K) * model_profile(v);
}

}  // namespace tripod
