#include "tripod/variation.hpp"

#include <array>
#include <stdexcept>

#include "tripod/gauss1d.hpp"

namespace tripod {
namespace {

constexpr double kQuadTol = 1e-11;

// Integral of <w, z> over the (i,j) interface ray against the weighted length
// measure: the normal component is constant at distance d and the tangential
// component integrates the shifted first moment of the 1D Gaussian.
double first_moment(const PlanePoint& x, const PlanePoint& w, int i, int j) {
  const FramePair f = frame(i, j);
  const double d = dot(x, f.n);
  const double c = dot(x, f.t);
  return dot(w, f.n) * d * gauss::pdf(d) * gauss::cdf_upper(c) +
         dot(w, f.t) * gauss::pdf(d) * gauss::pdf(c);
}

}  // namespace

std::vector<TranslationSample> translation_scan(const PlanePoint& x,
                                                const PlanePoint& w,
                                                const std::vector<double>& ts) {
  if (!(w.norm() <= 5.0)) {
    throw std::domain_error("translation_scan: |w| must be <= 5");
  }
  for (double t : ts) {
    if (!(t >= -1.0 && t <= 1.0)) {
      throw std::domain_error("translation_scan: offsets must lie in [-1, 1]");
    }
  }
  std::vector<TranslationSample> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const PlanePoint xt = x + t * w;
    const InterfaceAreas a = interface_areas(xt);
    out.push_back({t, volume_map(xt, kQuadTol), a.a12 + a.a23 + a.a31});
  }
  return out;
}

VariationReport index_form_translation(const PlanePoint& x,
                                       const PlanePoint& w) {
  std::array<double, 3> dv = {0.0, 0.0, 0.0};
  std::array<double, 3> d2v = {0.0, 0.0, 0.0};
  double da = 0.0;
  double d2a = 0.0;
  double q = 0.0;
  for (const auto& [i, j] : kCyclicPairs) {
    const FramePair f = frame(i, j);
    const double a = interface_area(x, i, j);
    const double wn = dot(w, f.n);
    const double s = first_moment(x, w, i, j);
    const double h = weighted_mean_curvature(x, i, j);
    dv[i - 1] += wn * a;
    dv[j - 1] -= wn * a;
    d2v[i - 1] -= wn * s;
    d2v[j - 1] += wn * s;
    da += h * wn * a;
    d2a -= h * wn * s + wn * wn * a;
    q -= wn * wn * a;
  }
  VariationReport r;
  r.dV = PlanePoint::from_coords3(dv[0], dv[1], dv[2]);
  r.dA = da;
  r.d2V = PlanePoint::from_coords3(d2v[0], d2v[1], d2v[2]);
  r.d2A = d2a;
  r.Q = q;
  return r;
}

}  // namespace tripod
