#include "verify_suite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "tripod/cluster.hpp"
#include "tripod/e_plane.hpp"
#include "tripod/gauss1d.hpp"
#include "tripod/model.hpp"
#include "tripod/variation.hpp"

namespace tripod {

namespace {

constexpr double kArmArea = 0.19947114020071635;
constexpr double kSymmetricProfile = 0.5984134206021490;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
}

PlanePoint random_plane_point(std::mt19937_64& rng, double radius) {
  return PlanePoint::from_coords2(uniform(rng, -radius, radius),
                                  uniform(rng, -radius, radius));
}

SimplexVolume random_interior_volume(std::mt19937_64& rng) {
  double e[3];
  for (double& x : e) {
    x = 0.1 + std::exp(uniform(rng, -1.5, 1.5));
  }
  const double s = e[0] + e[1] + e[2];
  const double v1 = e[0] / s;
  const double v2 = e[1] / s;
  return SimplexVolume::from_triple(v1, v2, 1.0 - (v1 + v2));
}

template <class F>
double central_diff(const F& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// v shifted along a zero-sum direction with the exact-closure third entry.
SimplexVolume shift_volume(const SimplexVolume& v,
                           const std::array<double, 3>& d, double h) {
  const double w1 = v[0] + h * d[0];
  const double w2 = v[1] + h * d[1];
  return SimplexVolume::from_triple(w1, w2, 1.0 - (w1 + w2));
}

// Five-point second difference: the profile's fourth derivative blows up
// toward the simplex corners, so the extra accuracy order keeps the
// truncation error negligible at a step large enough to stay clear of
// cancellation noise.
double profile_second_diff(const SimplexVolume& v,
                           const std::array<double, 3>& d, double h) {
  const double f2p = model_profile(shift_volume(v, d, 2.0 * h));
  const double fp = model_profile(shift_volume(v, d, h));
  const double f0 = model_profile(v);
  const double fm = model_profile(shift_volume(v, d, -h));
  const double f2m = model_profile(shift_volume(v, d, -2.0 * h));
  return (-f2p + 16.0 * fp - 30.0 * f0 + 16.0 * fm - f2m) / (12.0 * h * h);
}

// Distance of the volume triple to the simplex boundary, used to shrink
// finite-difference steps where the profile steepens.
double boundary_margin(const SimplexVolume& v) {
  double m = 1.0;
  for (int i = 0; i < 3; ++i) {
    m = std::min({m, v[i], 1.0 - v[i]});
  }
  return m;
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : opt_(options) {}

  void add(const std::string& name, double residual, double tolerance) {
    VerifyCheck c;
    c.name = name;
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    if (!c.pass) ++report_.failed;
    report_.checks.push_back(std::move(c));
  }

  VerifyReport take() { return std::move(report_); }

  const VerifyOptions& opt() const { return opt_; }

 private:
  VerifyOptions opt_;
  VerifyReport report_;
};

void gauss1d_checks(Suite& s) {
  double cdfSymmetry = 0.0;
  double pdfDerivative = 0.0;
  for (int i = -80; i <= 80; ++i) {
    const double x = 0.1 * i;
    cdfSymmetry =
        std::max(cdfSymmetry, std::abs(gauss::cdf(x) + gauss::cdf(-x) - 1.0));
    const double fd = central_diff([](double u) { return gauss::pdf(u); }, x,
                                   1e-5);
    pdfDerivative = std::max(pdfDerivative, std::abs(fd + x * gauss::pdf(x)));
  }
  s.add("gauss1d/cdf-symmetry", cdfSymmetry, 1e-15);
  s.add("gauss1d/pdf-derivative-identity", pdfDerivative, 1e-8);

  // Rounding cdf(x) to a double near 1 costs an ulp that the inverse
  // amplifies by 1/pdf(x), about 4e-8 at x = 6; the tolerance covers that
  // irreducible loss, not the accuracy of either function.
  double quantRound = 0.0;
  for (int i = -60; i <= 60; ++i) {
    const double x = 0.1 * i;
    quantRound = std::max(quantRound,
                          std::abs(gauss::quantile(gauss::cdf(x)) - x));
  }
  s.add("gauss1d/quantile-roundtrip", quantRound, 5e-8);

  double quantInverse = 0.0;
  for (int i = 1; i <= 199; ++i) {
    const double p = i / 200.0;
    quantInverse =
        std::max(quantInverse, std::abs(gauss::cdf(gauss::quantile(p)) - p));
  }
  s.add("gauss1d/quantile-inverse", quantInverse, 1e-15);

  // Composite Simpson over [-8, 8].
  const int intervals = 4096;
  const double h = 16.0 / intervals;
  double integral = gauss::pdf(-8.0) + gauss::pdf(8.0);
  for (int i = 1; i < intervals; ++i) {
    integral += (i % 2 == 1 ? 4.0 : 2.0) * gauss::pdf(-8.0 + i * h);
  }
  integral *= h / 3.0;
  s.add("gauss1d/pdf-normalization", std::abs(integral - 1.0), 1e-10);

  double bubbleSymmetry = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double v = 0.01 * i;
    bubbleSymmetry =
        std::max(bubbleSymmetry, std::abs(gauss::single_bubble_profile(v) -
                                          gauss::single_bubble_profile(1.0 - v)));
  }
  s.add("gauss1d/bubble-symmetry", bubbleSymmetry, 1e-15);
  s.add("gauss1d/bubble-center-value",
        std::abs(gauss::single_bubble_profile(0.5) - gauss::pdf(0.0)), 1e-16);

  double ode = 0.0;
  for (int i = 1; i <= 97; ++i) {
    ode = std::max(ode, std::abs(gauss::single_bubble_ode_residual(i / 98.0)));
  }
  s.add("gauss1d/bubble-ode-residual", ode, 1e-5);

  double bubbleDerivative = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double v = 0.05 * i;
    const double fd = central_diff(
        [](double u) { return gauss::single_bubble_profile(u); }, v, 1e-5);
    bubbleDerivative =
        std::max(bubbleDerivative, std::abs(fd + gauss::quantile(v)));
  }
  s.add("gauss1d/bubble-derivative", bubbleDerivative, 1e-6);
}

void model_checks(Suite& s) {
  std::mt19937_64 rng(12345);

  double volumeSum = 0.0;
  double volumePositivity = 0.0;
  double equivariance = 0.0;
  for (int k = 0; k < 20; ++k) {
    const PlanePoint x = random_plane_point(rng, 2.5);
    const SimplexVolume v = volume_map(x);
    volumeSum = std::max(volumeSum, std::abs(v[0] + v[1] + v[2] - 1.0));
    volumePositivity = std::max(volumePositivity, -v.min_entry());
    // Swapping coordinates 1 and 2 of x swaps cells 1 and 2.
    const PlanePoint sx = PlanePoint::from_coords3(x[1], x[0], x[2]);
    const SimplexVolume sv = volume_map(sx);
    equivariance = std::max(
        equivariance, std::max(std::abs(sv[0] - v[1]),
                               std::max(std::abs(sv[1] - v[0]),
                                        std::abs(sv[2] - v[2]))));
  }
  s.add("model/volume-sum-exact", volumeSum, 0.0);
  s.add("model/volume-positivity", volumePositivity, 0.0);
  s.add("model/volume-swap-equivariance", equivariance, 1e-10);

  const int roundTripCount = s.opt().full ? 200 : 20;
  double roundTrip = 0.0;
  for (int k = 0; k < roundTripCount; ++k) {
    const PlanePoint x = random_plane_point(rng, 4.0 / 1.4142135623730951);
    const PlanePoint back = invert_volume_map(volume_map(x));
    roundTrip = std::max(roundTrip, (back - x).norm());
  }
  s.add(s.opt().full ? "model/roundtrip-200" : "model/roundtrip", roundTrip,
        1e-7);

  double jacobian = 0.0;
  double jacobianSums = 0.0;
  const std::array<PlanePoint, 2> dirs = {PlanePoint::from_coords2(1.0, 0.0),
                                          PlanePoint::from_coords2(0.0, 1.0)};
  for (int k = 0; k < 10; ++k) {
    const PlanePoint x = random_plane_point(rng, 3.0);
    const Eigen::Matrix3d m33 = volume_jacobian(x).m33;
    for (int i = 0; i < 3; ++i) {
      jacobianSums = std::max(jacobianSums, std::abs(m33.row(i).sum()));
      jacobianSums = std::max(jacobianSums, std::abs(m33.col(i).sum()));
    }
    const double h = 1e-5;
    for (int d = 0; d < 2; ++d) {
      const SimplexVolume up = volume_map(x + h * dirs[d], 1e-12);
      const SimplexVolume dn = volume_map(x - h * dirs[d], 1e-12);
      const Eigen::Vector3d dir3(dirs[d][0], dirs[d][1], dirs[d][2]);
      const Eigen::Vector3d analytic =
          s.opt().jacobianScale * (m33 * dir3);
      for (int c = 0; c < 3; ++c) {
        const double fd = (up[c] - dn[c]) / (2.0 * h);
        jacobian = std::max(jacobian, std::abs(fd - analytic[c]));
      }
    }
  }
  s.add("model/jacobian-vs-fd", jacobian, 1e-6);
  s.add("model/jacobian-zero-sums", jacobianSums, 1e-12);

  s.add("model/profile-symmetric-point",
        std::abs(model_profile(SimplexVolume::from_triple(
            1.0 / 3, 1.0 / 3, 1.0 / 3)) - kSymmetricProfile),
        1e-8);

  double gradient = 0.0;
  double hessian = 0.0;
  double trace = 0.0;
  double negdef = -1e300;
  double profileInvariance = 0.0;
  for (int k = 0; k < 5; ++k) {
    const SimplexVolume v = random_interior_volume(rng);
    const std::array<double, 2> grad =
        model_profile_gradient(v).coords2();
    const Eigen::Matrix2d hess = model_profile_hessian(v).m22;
    trace = std::max(trace, trace_identity_residual(v));
    negdef = std::max(
        negdef,
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hess).eigenvalues()(1));
    const SimplexVolume sv = SimplexVolume::from_triple(v[1], v[0], v[2]);
    profileInvariance =
        std::max(profileInvariance,
                 std::abs(model_profile(sv) - model_profile(v)));

    // Tangent-plane finite differences: shift the volume triple along the
    // zero-sum basis directions. Diagonal Hessian entries come from plain
    // second differences, the off-diagonal from polarization.
    const double hg = std::max(1e-5, 1e-3 * boundary_margin(v));
    const std::array<std::array<double, 3>, 2> tang = {kU1, kU2};
    for (int dir = 0; dir < 2; ++dir) {
      const double fd = (model_profile(shift_volume(v, tang[dir], hg)) -
                         model_profile(shift_volume(v, tang[dir], -hg))) /
                        (2.0 * hg);
      gradient = std::max(gradient, std::abs(fd - grad[dir]));
    }
    const double hh = 1e-4;
    const double h11 = profile_second_diff(v, kU1, hh);
    const double h22 = profile_second_diff(v, kU2, hh);
    std::array<double, 3> diag;
    for (int c = 0; c < 3; ++c) diag[c] = kU1[c] + kU2[c];
    const double h12 =
        0.5 * (profile_second_diff(v, diag, hh) - h11 - h22);
    hessian = std::max(hessian, std::abs(h11 - hess(0, 0)));
    hessian = std::max(hessian, std::abs(h22 - hess(1, 1)));
    hessian = std::max(hessian, std::abs(h12 - hess(0, 1)));
  }
  s.add("model/gradient-vs-fd", gradient, 1e-5);
  s.add("model/hessian-vs-fd", hessian, 1e-4);
  s.add("model/trace-identity", trace, 1e-6);
  s.add("model/hessian-top-eigenvalue", negdef, 0.0);
  s.add("model/profile-swap-invariance", profileInvariance, 1e-11);

  // One ray toward the v3 = 0 edge; the profile must approach the
  // single-bubble value of the dominant cell.
  double boundary = 0.0;
  {
    const double eps = 1e-3;
    const double v1 = 0.65 * (1.0 - eps);
    const double v2 = 0.35 * (1.0 - eps);
    const SimplexVolume v =
        SimplexVolume::from_triple(v1, v2, 1.0 - (v1 + v2));
    boundary = std::abs(model_profile(v) -
                        gauss::single_bubble_profile(v.max_entry()));
  }
  s.add("model/boundary-agreement", boundary, 1e-2);

  double scaling = 0.0;
  const SimplexVolume vs = SimplexVolume::from_triple(0.5, 0.3, 0.2);
  for (double K : {0.25, 1.0, 4.0}) {
    scaling = std::max(scaling,
                       std::abs(strongly_convex_lower_bound(K, vs) -
                                std::sqrt(K) * model_profile(vs)));
  }
  s.add("model/strong-convexity-scaling", scaling, 0.0);

  double brackets = 0.0;
  for (int k = 0; k < 10; ++k) {
    const PlanePoint x = random_plane_point(rng, 2.0);
    for (int i = 1; i <= 3; ++i) {
      const auto [lo, hi] = measure_bounds(x, i);
      const double m = cell_measure(x, i, 1e-11);
      brackets = std::max(brackets, std::max(lo - m, m - hi));
    }
  }
  s.add("model/measure-brackets", brackets, 1e-9);

  double arms = 0.0;
  const InterfaceAreas a0 = interface_areas(PlanePoint());
  for (double a : {a0.a12, a0.a23, a0.a31}) {
    arms = std::max(arms, std::abs(a - kArmArea));
  }
  s.add("model/origin-arm-areas", arms, 1e-15);

  double curvature = 0.0;
  for (int k = 0; k < 10; ++k) {
    const PlanePoint x = random_plane_point(rng, 2.5);
    for (const auto& [i, j] : kCyclicPairs) {
      const double hij = weighted_mean_curvature(x, i, j);
      const double hji = weighted_mean_curvature(x, j, i);
      curvature = std::max(curvature, std::abs(hij + hji));
      const double lambdaDiff = (x[i - 1] - x[j - 1]) / 1.4142135623730951;
      curvature = std::max(curvature, std::abs(hij - lambdaDiff));
    }
  }
  s.add("model/curvature-antisymmetry", curvature, 1e-12);
}

void cluster_checks(Suite& s) {
  std::mt19937_64 rng(67890);

  const PlanePoint vertex = PlanePoint::from_coords2(0.4, -0.25);
  {
    const GridCluster serial =
        make_tripod_grid(vertex, 6.0, 128, Execution::serial);
    const GridCluster parallel =
        make_tripod_grid(vertex, 6.0, 128, Execution::parallel);
    int mismatches = 0;
    for (std::size_t i = 0; i < serial.labels.size(); ++i) {
      if (serial.labels[i] != parallel.labels[i]) ++mismatches;
      if (serial.weights[i] != parallel.weights[i]) ++mismatches;
    }
    const GridMeasures ms = grid_measures(serial, Execution::serial);
    const GridMeasures mp = grid_measures(serial, Execution::parallel);
    for (int i = 0; i < 3; ++i) {
      if (ms.inside[i] != mp.inside[i]) ++mismatches;
    }
    if (ms.outside != mp.outside) ++mismatches;
    s.add("cluster/serial-parallel-build", static_cast<double>(mismatches),
          0.0);
    const double ps = grid_perimeter(serial, Execution::serial).perimeter;
    const double pp = grid_perimeter(serial, Execution::parallel).perimeter;
    s.add("cluster/serial-parallel-perimeter",
          ps == pp ? 0.0 : std::abs(ps - pp), 0.0);
  }

  auto measure_error = [&](int resolution) {
    const GridCluster c = make_tripod_grid(PlanePoint(), 6.0, resolution);
    const GridMeasures m = grid_measures(c);
    double err = 0.0;
    for (int i = 1; i <= 3; ++i) {
      err += std::abs(m.inside[i - 1] - 1.0 / 3.0);
    }
    return err;
  };
  const double err256 = measure_error(256);
  s.add("cluster/tripod-measures-256", err256, 2.0 / 256);

  {
    const GridCluster c = make_tripod_grid(vertex, 6.0, 128);
    const GridMeasures m = grid_measures(c);
    const double window = gauss::cdf(6.0) - gauss::cdf(-6.0);
    s.add("cluster/outside-mass",
          std::abs(m.outside - (1.0 - window * window)), 1e-12);

    GridCluster uniform = c;
    std::fill(uniform.labels.begin(), uniform.labels.end(),
              std::uint8_t{2});
    s.add("cluster/uniform-zero-perimeter",
          grid_perimeter(uniform).perimeter, 0.0);
  }

  {
    // Half plane split along the vertical axis.
    GridCluster c = make_tripod_grid(PlanePoint(), 6.0, 256);
    for (int iy = 0; iy < 256; ++iy) {
      for (int ix = 0; ix < 256; ++ix) {
        c.labels[static_cast<std::size_t>(iy) * 256 + ix] =
            c.center(ix) < 0.0 ? 1 : 2;
      }
    }
    const double window = gauss::cdf(6.0) - gauss::cdf(-6.0);
    const double exact = gauss::pdf(0.0) * window;
    const double est = grid_perimeter(c).perimeter;
    s.add("cluster/halfplane-perimeter", std::abs(est - exact) / exact,
          1e-12);

    // Same split tilted 30 degrees.
    const double ct = std::cos(0.5235987755982988);
    const double st = std::sin(0.5235987755982988);
    for (int iy = 0; iy < 256; ++iy) {
      for (int ix = 0; ix < 256; ++ix) {
        c.labels[static_cast<std::size_t>(iy) * 256 + ix] =
            ct * c.center(ix) + st * c.center(iy) < 0.0 ? 1 : 2;
      }
    }
    const double tilted = grid_perimeter(c).perimeter;
    s.add("cluster/halfplane-tilted-30deg", std::abs(tilted - exact) / exact,
          3e-2);
  }

  {
    const GridCluster c = make_tripod_grid(vertex, 6.0, 256);
    const PerimeterEstimate est = grid_perimeter(c);
    const double exact = interface_areas(vertex).total();
    s.add("cluster/tripod-perimeter-256",
          std::abs(est.perimeter - exact) / exact, 3e-2);

    const GridCluster c0 = make_tripod_grid(PlanePoint(), 6.0, 256);
    const PerimeterEstimate est0 = grid_perimeter(c0);
    const Eigen::Vector2d n12 = est0.stats.avgNormals[0];
    const double angle =
        std::acos(std::min(1.0, -n12.x() / n12.norm()));
    s.add("cluster/tripod-normal-angle", angle, 0.05);
  }

  int rankMisses = 0;
  double csFloor = 0.0;
  double csTripod = 0.0;
  for (int k = 0; k < 20; ++k) {
    const PlanePoint x = random_plane_point(rng, 2.0);
    const InterfaceStats stats = tripod_stats(x);
    if (dichotomy_rank(stats, 1e-6) != 2) ++rankMisses;
    const double gap = matrix_cs_gap(stats);
    csFloor = std::max(csFloor, -gap);
    csTripod = std::max(csTripod, std::abs(gap));

    OneDimCluster line;
    line.a = uniform(rng, -1.5, 0.0);
    line.b = uniform(rng, 0.1, 1.5);
    const InterfaceStats oneDim = one_dim_stats(line, uniform(rng, 0.0, 6.0));
    if (dichotomy_rank(oneDim, 1e-6) != 1) ++rankMisses;
    csFloor = std::max(csFloor, -matrix_cs_gap(oneDim));
  }
  s.add("cluster/dichotomy-ranks", static_cast<double>(rankMisses), 0.0);
  s.add("cluster/cauchy-schwarz-floor", csFloor, 1e-8);
  s.add("cluster/cauchy-schwarz-tripod-equality", csTripod, 1e-10);

  {
    const OneDimCluster c = one_dim_competitor(
        SimplexVolume::from_triple(1.0 / 3, 1.0 / 3, 1.0 / 3));
    const double expected = 2.0 * gauss::pdf(gauss::quantile(1.0 / 3));
    s.add("cluster/one-dim-competitor-symmetric",
          std::abs(c.perimeter() - expected), 1e-10);

    const SimplexVolume v = SimplexVolume::from_triple(0.5, 0.3, 0.2);
    const OneDimCluster cv = one_dim_competitor(v);
    const std::array<double, 3> m = cv.measures();
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      err += std::abs(m[i] - v[i]);
    }
    s.add("cluster/one-dim-measures-roundtrip", err, 1e-12);
  }

  {
    const GridCluster c = make_tripod_grid(vertex, 6.0, 64);
    std::ostringstream sink;
    save_grid(c, sink);
    std::istringstream source(sink.str());
    const GridCluster back = load_grid(source);
    int mismatches = 0;
    if (back.extent != c.extent || back.resolution != c.resolution) {
      ++mismatches;
    }
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      if (back.labels[i] != c.labels[i]) ++mismatches;
      if (back.weights[i] != c.weights[i]) ++mismatches;
    }
    s.add("cluster/serialization-roundtrip",
          static_cast<double>(mismatches), 0.0);
  }

  if (s.opt().full) {
    const GridCluster serial =
        make_tripod_grid(vertex, 6.0, 1024, Execution::serial);
    const GridCluster parallel =
        make_tripod_grid(vertex, 6.0, 1024, Execution::parallel);
    int mismatches = 0;
    for (std::size_t i = 0; i < serial.labels.size(); ++i) {
      if (serial.labels[i] != parallel.labels[i]) ++mismatches;
    }
    const double ps = grid_perimeter(serial, Execution::serial).perimeter;
    const double pp = grid_perimeter(serial, Execution::parallel).perimeter;
    if (ps != pp) ++mismatches;
    s.add("cluster/serial-parallel-1024", static_cast<double>(mismatches),
          0.0);

    const double err1024 = measure_error(1024);
    s.add("cluster/tripod-measures-1024", err1024, 2.0 / 1024);
    s.add("cluster/measure-convergence-ratio",
          std::max(0.0, 2.0 - err256 / err1024), 0.0);

    const double exact = interface_areas(vertex).total();
    s.add("cluster/tripod-perimeter-1024",
          std::abs(ps - exact) / exact, 2e-3);
  }
}

void variation_checks(Suite& s) {
  std::mt19937_64 rng(24680);

  double scanIdentity = 0.0;
  double slopes = 0.0;
  double qDecomposition = 0.0;
  double qMoment = 0.0;
  for (int k = 0; k < 5; ++k) {
    const PlanePoint x = random_plane_point(rng, 2.0);
    const PlanePoint w = random_plane_point(rng, 1.5);
    const VariationReport rep = index_form_translation(x, w);

    const auto scan = translation_scan(x, w, {0.0});
    const SimplexVolume v = volume_map(x);
    for (int i = 0; i < 3; ++i) {
      scanIdentity =
          std::max(scanIdentity, std::abs(scan[0].volumes[i] - v[i]));
    }
    scanIdentity = std::max(
        scanIdentity,
        std::abs(scan[0].perimeter - interface_areas(x).total()));

    const double h = 1e-3;
    const auto pair = translation_scan(x, w, {-h, h});
    const double fdPerimeter =
        (pair[1].perimeter - pair[0].perimeter) / (2.0 * h);
    slopes = std::max(slopes, std::abs(fdPerimeter - rep.dA));
    for (int i = 0; i < 3; ++i) {
      const double fdVolume =
          (pair[1].volumes[i] - pair[0].volumes[i]) / (2.0 * h);
      slopes = std::max(slopes, std::abs(fdVolume - rep.dV[i]));
    }

    const double lambdaD2V = dot(0.7071067811865476 * x, rep.d2V);
    qDecomposition =
        std::max(qDecomposition, std::abs(rep.Q - (rep.d2A - lambdaD2V)));

    // Q must meet the moment-matrix bound with equality for tripods.
    const InterfaceStats stats = tripod_stats(x);
    const Eigen::Matrix<double, 3, 2> basis = basis_matrix();
    const Eigen::Matrix2d l2 =
        basis.transpose() * area_laplacian(interface_areas(x)).m33 * basis;
    const Eigen::Matrix2d m2 = basis.transpose() * stats.M;
    const std::array<double, 2> w2 = w.coords2();
    const Eigen::Vector2d wv(w2[0], w2[1]);
    const Eigen::Vector2d mw = m2 * wv;
    qMoment = std::max(qMoment,
                       std::abs(rep.Q + mw.dot(l2.ldlt().solve(mw))));
  }
  s.add("variation/scan-time-zero-identity", scanIdentity, 1e-14);
  s.add("variation/first-order-slopes", slopes, 1e-6);
  s.add("variation/index-form-decomposition", qDecomposition, 1e-12);
  s.add("variation/index-form-moment-equality", qMoment, 1e-10);

  const VariationReport origin =
      index_form_translation(PlanePoint(), PlanePoint::from_coords2(1.0, 0.0));
  s.add("variation/index-form-origin",
        std::abs(origin.Q + 0.75 * gauss::pdf(0.0)), 1e-12);
}

}  // namespace

VerifyReport run_verify_suite(const VerifyOptions& options) {
  Suite s(options);
  gauss1d_checks(s);
  model_checks(s);
  cluster_checks(s);
  variation_checks(s);
  return s.take();
}

}  // namespace tripod
