#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace tripod {

// The zero-sum plane E = {x in R^3 : x1 + x2 + x3 = 0} carries all tripod
// vertices. Work happens in R^3 coordinates, with a fixed orthonormal basis
//   u1 = (1, -1, 0)/sqrt(2),  u2 = (1, 1, -2)/sqrt(6)
// for 2x2 linear algebra and reproducible test vectors.

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt6 = 0.40824829046386301637;

// Components chosen so each basis vector sums to an exact floating-point 0.
inline constexpr std::array<double, 3> kU1 = {kInvSqrt2, -kInvSqrt2, 0.0};
inline constexpr std::array<double, 3> kU2 = {kInvSqrt6, kInvSqrt6,
                                              -2.0 * kInvSqrt6};

class PlanePoint {
 public:
  PlanePoint() : c3_{0.0, 0.0, 0.0} {}

  // Validates the zero-sum invariant (|x1+x2+x3| <= 1e-12).
  static PlanePoint from_coords3(double a, double b, double c);
  static PlanePoint from_coords3(const std::array<double, 3>& c3) {
    return from_coords3(c3[0], c3[1], c3[2]);
  }

  // p*u1 + q*u2; exact zero-sum by construction.
  static PlanePoint from_coords2(double p, double q);

  const std::array<double, 3>& coords3() const { return c3_; }
  double operator[](int i) const { return c3_[i]; }

  std::array<double, 2> coords2() const {
    return {c3_[0] * kU1[0] + c3_[1] * kU1[1] + c3_[2] * kU1[2],
            c3_[0] * kU2[0] + c3_[1] * kU2[1] + c3_[2] * kU2[2]};
  }

  double norm() const {
    return std::sqrt(c3_[0] * c3_[0] + c3_[1] * c3_[1] + c3_[2] * c3_[2]);
  }

  friend PlanePoint operator+(const PlanePoint& a, const PlanePoint& b) {
    return PlanePoint({a.c3_[0] + b.c3_[0], a.c3_[1] + b.c3_[1],
                       a.c3_[2] + b.c3_[2]});
  }
  friend PlanePoint operator-(const PlanePoint& a, const PlanePoint& b) {
    return PlanePoint({a.c3_[0] - b.c3_[0], a.c3_[1] - b.c3_[1],
                       a.c3_[2] - b.c3_[2]});
  }
  friend PlanePoint operator*(double s, const PlanePoint& a) {
    return PlanePoint({s * a.c3_[0], s * a.c3_[1], s * a.c3_[2]});
  }

  friend double dot(const PlanePoint& a, const PlanePoint& b) {
    return a.c3_[0] * b.c3_[0] + a.c3_[1] * b.c3_[1] + a.c3_[2] * b.c3_[2];
  }

 private:
  explicit PlanePoint(std::array<double, 3> c3) : c3_(c3) {}
  std::array<double, 3> c3_;
};

// Interface frame: n points from cell i into cell j, t runs along the
// interface away from the vertex.
struct FramePair {
  PlanePoint n;
  PlanePoint t;
};

// n_ij = (e_j - e_i)/sqrt(2), t_ij = (e_i + e_j - 2 e_k)/sqrt(6).
// Indices are 1-based; rejects equal or out-of-range indices.
FramePair frame(int i, int j);

// Positively oriented index pairs; cyclic sums over this set cancel.
inline constexpr std::array<std::array<int, 2>, 3> kCyclicPairs = {
    {{1, 2}, {2, 3}, {3, 1}}};

// A symmetric bilinear form on E, kept in both views: the 3x3 matrix
// annihilating (1,1,1) and its 2x2 representation in the (u1, u2) basis.
struct EOperator {
  Eigen::Matrix3d m33;
  Eigen::Matrix2d m22;

  static EOperator from_m33(const Eigen::Matrix3d& m);
  static EOperator from_m22(const Eigen::Matrix2d& m);

  double trace_on_e() const { return m22.trace(); }
};

// The 3x2 matrix [u1 u2] mapping basis coordinates into R^3.
Eigen::Matrix<double, 3, 2> basis_matrix();

}  // namespace tripod
