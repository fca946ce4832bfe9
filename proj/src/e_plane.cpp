#include "tripod/e_plane.hpp"

#include <cmath>
#include <stdexcept>

namespace tripod {

PlanePoint PlanePoint::from_coords3(double a, double b, double c) {
  if (!(std::abs(a + b + c) <= 1e-12)) {
    throw std::domain_error("PlanePoint: coordinates must sum to 0");
  }
  return PlanePoint({a, b, c});
}

PlanePoint PlanePoint::from_coords2(double p, double q) {
  return PlanePoint({p * kU1[0] + q * kU2[0], p * kU1[1] + q * kU2[1],
                     p * kU1[2] + q * kU2[2]});
}

FramePair frame(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j) {
    throw std::domain_error("frame: indices must be distinct and in {1,2,3}");
  }
  const int k = 6 - i - j;
  std::array<double, 3> n{0.0, 0.0, 0.0};
  n[j - 1] = kInvSqrt2;
  n[i - 1] = -kInvSqrt2;
  std::array<double, 3> t{0.0, 0.0, 0.0};
  t[i - 1] = kInvSqrt6;
  t[j - 1] = kInvSqrt6;
  t[k - 1] = -2.0 * kInvSqrt6;
  return {PlanePoint::from_coords3(n), PlanePoint::from_coords3(t)};
}

Eigen::Matrix<double, 3, 2> basis_matrix() {
  Eigen::Matrix<double, 3, 2> b;
  b << kU1[0], kU2[0], kU1[1], kU2[1], kU1[2], kU2[2];
  return b;
}

EOperator EOperator::from_m33(const Eigen::Matrix3d& m) {
  const auto b = basis_matrix();
  return {m, b.transpose() * m * b};
}

EOperator EOperator::from_m22(const Eigen::Matrix2d& m) {
  const auto b = basis_matrix();
  return {b * m * b.transpose(), m};
}

}  // namespace tripod
