#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tripod/errors.hpp"
#include "tripod/gauss1d.hpp"
#include "tripod/model.hpp"

using namespace tripod;

namespace {

constexpr double kPhi0 = 0.3989422804014327;

PlanePoint random_plane_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    const double p = u(rng);
    const double q = u(rng);
    if (p * p + q * q <= radius * radius) {
      return PlanePoint::from_coords2(p, q);
    }
  }
}

SimplexVolume shift_volume(const SimplexVolume& v, const std::array<double, 3>& d,
                           double h) {
  return SimplexVolume::from_triple(v[0] + h * d[0], v[1] + h * d[1],
                                    v[2] + h * d[2]);
}

// Directional second difference of model_profile in the volume plane.
double profile_second_diff(const SimplexVolume& v, const std::array<double, 3>& d,
                           double h) {
  const double up = model_profile(shift_volume(v, d, h));
  const double mid = model_profile(v);
  const double dn = model_profile(shift_volume(v, d, -h));
  return (up - 2.0 * mid + dn) / (h * h);
}

}  // namespace

TEST_CASE("plane points: basis, round trips, validation") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const PlanePoint x = random_plane_point(rng, 5.0);
    const auto c3 = x.coords3();
    CHECK(std::abs(c3[0] + c3[1] + c3[2]) <= 1e-13);
    const auto [p, q] = x.coords2();
    const PlanePoint back = PlanePoint::from_coords2(p, q);
    for (int c = 0; c < 3; ++c) {
      CHECK(std::abs(back[c] - x[c]) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(PlanePoint::from_coords3(1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("interface frames: orientation, orthonormality, cyclic cancellation") {
  const FramePair f12 = frame(1, 2);
  CHECK(std::abs(f12.n[0] - (-kInvSqrt2)) <= 1e-16);
  CHECK(std::abs(f12.n[1] - kInvSqrt2) <= 1e-16);
  CHECK(f12.n[2] == 0.0);
  CHECK(std::abs(f12.t[0] - kInvSqrt6) <= 1e-16);
  CHECK(std::abs(f12.t[1] - kInvSqrt6) <= 1e-16);
  CHECK(std::abs(f12.t[2] - (-2.0 * kInvSqrt6)) <= 1e-16);

  const FramePair f21 = frame(2, 1);
  for (int c = 0; c < 3; ++c) {
    CHECK(f21.n[c] == -f12.n[c]);
    CHECK(f21.t[c] == f12.t[c]);
  }

  std::array<double, 3> nsum = {0, 0, 0};
  std::array<double, 3> tsum = {0, 0, 0};
  for (const auto& [i, j] : kCyclicPairs) {
    const FramePair f = frame(i, j);
    CHECK(std::abs(f.n.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(f.t.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(dot(f.n, f.t)) <= 1e-14);
    for (int c = 0; c < 3; ++c) {
      nsum[c] += f.n[c];
      tsum[c] += f.t[c];
    }
  }
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(nsum[c]) <= 1e-15);
    CHECK(std::abs(tsum[c]) <= 1e-13);
  }

  CHECK_THROWS_AS(frame(1, 1), std::domain_error);
  CHECK_THROWS_AS(frame(0, 2), std::domain_error);
  CHECK_THROWS_AS(frame(1, 4), std::domain_error);
}

TEST_CASE("interface areas: origin value, axis formulas, envelope") {
  CHECK(std::abs(interface_area(PlanePoint{}, 1, 2) - 0.19947114020071635) <=
        1e-16);

  // Along t_12 the area decays monotonically to 0.
  const FramePair f12 = frame(1, 2);
  double prev = interface_area(PlanePoint{}, 1, 2);
  for (double s : {0.5, 1.0, 2.0, 4.0, 7.0}) {
    const double a = interface_area(s * f12.t, 1, 2);
    CHECK(a < prev);
    prev = a;
  }
  CHECK(prev <= 1e-12);

  // Along n_12 the t-factor stays 1/2.
  for (double s : {-2.0, -0.5, 0.7, 1.9}) {
    const double a = interface_area(s * f12.n, 1, 2);
    CHECK(std::abs(a - 0.5 * gauss::pdf(s)) <= 1e-15);
  }

  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const PlanePoint x = random_plane_point(rng, 5.0);
    const InterfaceAreas a = interface_areas(x);
    for (double val : {a.a12, a.a23, a.a31}) {
      CHECK(val > 0.0);
      CHECK(val <= kPhi0 * (1.0 + 1e-15));
    }
  }
}

TEST_CASE("cell measures: symmetry point and Monte-Carlo agreement") {
  for (int i = 1; i <= 3; ++i) {
    CHECK(std::abs(cell_measure(PlanePoint{}, i, 1e-12) - 1.0 / 3.0) <= 2e-12);
  }

  const long n = 10'000'000;

  // Equal split at the origin.
  const double mc0 = oracle::mc_cell_measure(PlanePoint{}, 1, n, 2024);
  CHECK(std::abs(cell_measure(PlanePoint{}, 1, 1e-12) - mc0) <=
        3.0 * oracle::mc_sigma(1.0 / 3.0, n));

  // Dominant first cell: x1 - x2 = x1 - x3 = -6.
  const PlanePoint dom = PlanePoint::from_coords3(-4.0, 2.0, 2.0);
  const double m_dom = cell_measure(dom, 1, 1e-12);
  const double mc_dom = oracle::mc_cell_measure(dom, 1, n, 2025);
  CHECK(std::abs(m_dom - mc_dom) <= 3.0 * oracle::mc_sigma(m_dom, n));
  CHECK(m_dom > 1.0 - 5e-5);

  // A generic vertex, all three cells.
  const PlanePoint gen = PlanePoint::from_coords3(0.5, 0.3, -0.8);
  for (int i = 1; i <= 3; ++i) {
    const double m = cell_measure(gen, i, 1e-12);
    const double mc = oracle::mc_cell_measure(gen, i, n, 3000 + i);
    CHECK(std::abs(m - mc) <= 4.0 * oracle::mc_sigma(m, n));
  }

  CHECK_THROWS_AS(cell_measure(PlanePoint{}, 0, 1e-10), std::domain_error);
  CHECK_THROWS_AS(cell_measure(PlanePoint{}, 4, 1e-10), std::domain_error);
  CHECK_THROWS_AS(cell_measure(PlanePoint{}, 1, 1e-13), std::domain_error);
  CHECK_THROWS_AS(cell_measure(PlanePoint{}, 1, 1e-5), std::domain_error);
}

TEST_CASE("measure bounds: origin values and the sandwich property") {
  const auto [lo0, up0] = measure_bounds(PlanePoint{}, 1);
  CHECK(std::abs(lo0 - 0.25) <= 1e-15);
  CHECK(std::abs(up0 - 0.5) <= 1e-15);

  // A vertex pushed along e1 leaves only a small upper envelope for cell 1.
  const PlanePoint far1 = PlanePoint::from_coords3(3.0, -1.5, -1.5);
  const auto [lof, upf] = measure_bounds(far1, 1);
  CHECK(upf <= gauss::cdf_upper(3.0));
  CHECK(lof <= upf);
  CHECK(cell_measure(far1, 1, 1e-10) <= upf + 1e-9);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const PlanePoint x = random_plane_point(rng, 5.0);
    const int i = 1 + static_cast<int>(rng() % 3);
    const auto [lo, up] = measure_bounds(x, i);
    const double m = cell_measure(x, i, 1e-10);
    CHECK(lo <= m + 1e-9);
    CHECK(m <= up + 1e-9);
  }
}

TEST_CASE("volume map: normalization, symmetry point, equivariance") {
  double renorm = 0.0;
  const SimplexVolume v0 = volume_map(PlanePoint{}, 1e-11, &renorm);
  CHECK(renorm <= 3e-11);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(v0[i] - 1.0 / 3.0) <= 1e-9);
  }
  CHECK(v0[0] + v0[1] + v0[2] == 1.0);

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanePoint x = random_plane_point(rng, 4.0);
    const SimplexVolume v = volume_map(x, 1e-11, &renorm);
    CHECK(renorm <= 3e-11);
    CHECK(v[0] + v[1] + v[2] == 1.0);
    // S3 action: permuting the vertex coordinates permutes the cells.
    for (const auto& perm : oracle::kAllPerms) {
      const SimplexVolume pv = volume_map(oracle::permute_point(x, perm), 1e-11);
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(pv[c] - v[perm[c]]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("area equivariance under coordinate permutations") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanePoint x = random_plane_point(rng, 4.0);
    for (const auto& perm : oracle::kAllPerms) {
      const PlanePoint px = oracle::permute_point(x, perm);
      for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
          if (i == j) continue;
          CHECK(std::abs(interface_area(px, i, j) -
                         interface_area(x, perm[i - 1] + 1, perm[j - 1] + 1)) <=
                1e-12);
        }
      }
    }
  }
}

TEST_CASE("volume jacobian: closed form at the origin and structure") {
  const EOperator dv0 = volume_jacobian(PlanePoint{});
  const double expected = -3.0 * kPhi0 / (2.0 * std::sqrt(2.0));
  CHECK(std::abs(dv0.m22(0, 0) - expected) <= 1e-12);
  CHECK(std::abs(dv0.m22(1, 1) - expected) <= 1e-12);
  CHECK(std::abs(dv0.m22(0, 1)) <= 1e-12);
  CHECK(std::abs(dv0.m22(1, 0)) <= 1e-12);

  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const PlanePoint x = random_plane_point(rng, 4.0);
    const EOperator dv = volume_jacobian(x);
    for (int r = 0; r < 3; ++r) {
      CHECK(std::abs(dv.m33.row(r).sum()) <= 1e-15);
    }
    CHECK(std::abs(dv.m33(0, 1) - dv.m33(1, 0)) <= 1e-15);
  }
}

TEST_CASE("volume jacobian matches finite differences of the volume map") {
  std::mt19937_64 rng(17);
  const double h = 1e-5;
  const std::array<PlanePoint, 2> dirs = {
      PlanePoint::from_coords2(1.0, 0.0), PlanePoint::from_coords2(0.0, 1.0)};
  for (int trial = 0; trial < 100; ++trial) {
    const PlanePoint x = random_plane_point(rng, 3.0);
    const EOperator dv = volume_jacobian(x);
    for (int d = 0; d < 2; ++d) {
      const SimplexVolume up = volume_map(x + h * dirs[d], 1e-12);
      const SimplexVolume dn = volume_map(x - h * dirs[d], 1e-12);
      const Eigen::Vector3d dir3(dirs[d][0], dirs[d][1], dirs[d][2]);
      const Eigen::Vector3d analytic = dv.m33 * dir3;
      for (int c = 0; c < 3; ++c) {
        const double fd = (up[c] - dn[c]) / (2.0 * h);
        CHECK(std::abs(fd - analytic[c]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("volume map inversion: fixed point, round trips, stress") {
  const PlanePoint x0 =
      invert_volume_map(SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
  CHECK(x0.norm() <= 1e-9);

  std::mt19937_64 rng(18);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const PlanePoint x = random_plane_point(rng, 4.0);
    const SimplexVolume v = volume_map(x, 1e-12);
    if (v.min_entry() < 1e-6) continue;  // outside the inversion domain
    const PlanePoint back = invert_volume_map(v, 1e-10);
    const auto a = x.coords2();
    const auto b = back.coords2();
    const double err =
        std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
    worst = std::max(worst, err);
  }
  CHECK(worst <= 1e-9);

  // Volumes pinned one entry from the boundary still invert.
  const SimplexVolume skew = SimplexVolume::from_triple(1e-5, 0.5, 0.5 - 1e-5);
  const PlanePoint xs = invert_volume_map(skew, 1e-10);
  CHECK(xs.norm() > 2.0);
  const SimplexVolume vs = volume_map(xs, 1e-12);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(vs[c] - skew[c]) <= 1e-9);
  }

  CHECK_THROWS_AS(
      invert_volume_map(SimplexVolume::from_triple(1e-7, 0.5, 0.5 - 1e-7)),
      std::domain_error);
  CHECK_THROWS_AS(
      invert_volume_map(SimplexVolume::from_triple(0.3, 0.3, 0.4), 1e-11),
      std::domain_error);
}

TEST_CASE("model profile: symmetric value, boundary values, continuity") {
  const SimplexVolume bary =
      SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  CHECK(std::abs(model_profile(bary) - 0.5984134206021490) <= 1e-8);

  CHECK(std::abs(model_profile(SimplexVolume::from_triple(0.5, 0.5, 0.0)) -
                 kPhi0) <= 1e-15);
  CHECK(model_profile(SimplexVolume::from_triple(1.0, 0.0, 0.0)) == 0.0);

  // v_eps = (1/2-eps, 1/2-eps, 2eps): values decrease toward the two-cell
  // profile value as eps shrinks.
  double prev_gap = 1.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const SimplexVolume v =
        SimplexVolume::from_triple(0.5 - eps, 0.5 - eps, 2.0 * eps);
    const double gap = model_profile(v) - kPhi0;
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("profile gradient: symmetric zero, finite differences, equivariance") {
  const SimplexVolume bary =
      SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  CHECK(model_profile_gradient(bary).norm() <= 1e-9);

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.08, 0.55);
  const double h = 3e-4;
  for (int trial = 0; trial < 12; ++trial) {
    double a = u(rng), b = u(rng);
    if (a + b > 0.9) {
      a *= 0.5;
      b *= 0.5;
    }
    const SimplexVolume v = SimplexVolume::from_triple(a, b, 1.0 - a - b);
    const PlanePoint g = model_profile_gradient(v);

    for (const auto& dir : {kU1, kU2}) {
      const double fd = (model_profile(shift_volume(v, dir, h)) -
                         model_profile(shift_volume(v, dir, -h))) /
                        (2.0 * h);
      const double analytic =
          g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2];
      CHECK(std::abs(fd - analytic) <= 1e-5);
    }

    for (const auto& perm : oracle::kAllPerms) {
      const SimplexVolume pv =
          SimplexVolume::from_triple(v[perm[0]], v[perm[1]], v[perm[2]]);
      const PlanePoint pg = model_profile_gradient(pv);
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(pg[c] - g[perm[c]]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("profile hessian: symmetric closed form, negativity, finite differences") {
  const SimplexVolume bary =
      SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  const EOperator h0 = model_profile_hessian(bary);
  const double expected = -2.0 / (3.0 * kPhi0);
  CHECK(std::abs(h0.m22(0, 0) - expected) <= 1e-9);
  CHECK(std::abs(h0.m22(1, 1) - expected) <= 1e-9);
  CHECK(std::abs(h0.m22(0, 1)) <= 1e-9);

  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(0.1, 0.5);
  const double h = 2e-3;
  for (int trial = 0; trial < 8; ++trial) {
    double a = u(rng), b = u(rng);
    if (a + b > 0.88) {
      a *= 0.5;
      b *= 0.5;
    }
    const SimplexVolume v = SimplexVolume::from_triple(a, b, 1.0 - a - b);
    const EOperator hess = model_profile_hessian(v);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess.m22);
    CHECK(es.eigenvalues()[0] < 0.0);
    CHECK(es.eigenvalues()[1] < 0.0);

    // Diagonal entries via plain second differences, off-diagonal via the
    // four-point cross difference.
    const double h11 = profile_second_diff(v, kU1, h);
    const double h22 = profile_second_diff(v, kU2, h);
    CHECK(std::abs(h11 - hess.m22(0, 0)) <= 1e-4);
    CHECK(std::abs(h22 - hess.m22(1, 1)) <= 1e-4);

    std::array<double, 3> diag;
    for (int c = 0; c < 3; ++c) diag[c] = kU1[c] + kU2[c];
    const double hpp = profile_second_diff(v, diag, h);
    const double h12 = 0.5 * (hpp - h11 - h22);
    CHECK(std::abs(h12 - hess.m22(0, 1)) <= 1e-4);
  }
}

TEST_CASE("hessian conjugates under coordinate permutations") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.15, 0.45);
  for (int trial = 0; trial < 5; ++trial) {
    double a = u(rng), b = u(rng);
    if (a + b > 0.85) {
      a *= 0.5;
      b *= 0.5;
    }
    const SimplexVolume v = SimplexVolume::from_triple(a, b, 1.0 - a - b);
    const EOperator h = model_profile_hessian(v);
    for (const auto& perm : oracle::kAllPerms) {
      const SimplexVolume pv =
          SimplexVolume::from_triple(v[perm[0]], v[perm[1]], v[perm[2]]);
      const EOperator ph = model_profile_hessian(pv);
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          CHECK(std::abs(ph.m33(r, c) - h.m33(perm[r], perm[c])) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("trace identity: symmetric point, random interior, boundary stress") {
  const SimplexVolume bary =
      SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  const EOperator h0 = model_profile_hessian(bary);
  const double lhs = -h0.m22.inverse().trace();
  CHECK(std::abs(lhs - 1.1968268412042981) <= 1e-9);
  CHECK(std::abs(2.0 * model_profile(bary) - 1.1968268412042981) <= 1e-8);
  CHECK(trace_identity_residual(bary) <= 1e-9);

  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (int trial = 0; trial < 15; ++trial) {
    double a = u(rng), b = u(rng);
    if (a + b > 0.93) {
      a *= 0.5;
      b *= 0.5;
    }
    CHECK(trace_identity_residual(
              SimplexVolume::from_triple(a, b, 1.0 - a - b)) <= 1e-7);
  }

  CHECK(trace_identity_residual(
            SimplexVolume::from_triple(0.01, 0.49, 0.5)) <= 1e-6);
}

TEST_CASE("weighted mean curvature: identities") {
  for (const auto& [i, j] : kCyclicPairs) {
    CHECK(weighted_mean_curvature(PlanePoint{}, i, j) == 0.0);
  }

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const PlanePoint x = random_plane_point(rng, 5.0);
    double cyclic = 0.0;
    for (const auto& [i, j] : kCyclicPairs) {
      cyclic += weighted_mean_curvature(x, i, j);
    }
    CHECK(std::abs(cyclic) <= 1e-14);

    // H_12 = lambda_1 - lambda_2 with lambda = x/sqrt(2).
    const double h12 = weighted_mean_curvature(x, 1, 2);
    CHECK(std::abs(h12 - (x[0] - x[1]) * kInvSqrt2) <= 1e-14);
  }
}

TEST_CASE("strongly convex lower bound: scaling") {
  const SimplexVolume bary =
      SimplexVolume::from_triple(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  const double base = strongly_convex_lower_bound(1.0, bary);
  CHECK(std::abs(base - 0.59841342) <= 1e-8);
  CHECK(strongly_convex_lower_bound(4.0, bary) == 2.0 * base);
  CHECK(strongly_convex_lower_bound(0.25, bary) == 0.5 * base);
  CHECK_THROWS_AS(strongly_convex_lower_bound(0.0, bary), std::domain_error);
  CHECK_THROWS_AS(strongly_convex_lower_bound(-1.0, bary), std::domain_error);
}

TEST_CASE("simplex volume validation") {
  CHECK_THROWS_AS(SimplexVolume::from_triple(-0.1, 0.6, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(SimplexVolume::from_triple(0.3, 0.3, 0.3),
                  std::domain_error);
  const SimplexVolume v = SimplexVolume::from_triple(0.2, 0.3, 0.5);
  CHECK(v.interior());
  CHECK(v.min_entry() == 0.2);
  CHECK(v.max_entry() == 0.5);
}
