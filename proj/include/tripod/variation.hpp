#pragma once

#include <vector>

#include "tripod/e_plane.hpp"
#include "tripod/model.hpp"

namespace tripod {

// First and second variation data of the cell partition with vertex x under
// the translation flow z -> z + t*w, evaluated at t = 0. The volume entries
// sum to zero, and Q = d2A - <lambda, d2V> holds for lambda = x/sqrt(2).
struct VariationReport {
  PlanePoint dV;
  double dA = 0.0;
  PlanePoint d2V;
  double d2A = 0.0;
  double Q = 0.0;
};

struct TranslationSample {
  double t;
  SimplexVolume volumes;
  double perimeter;
};

// Volumes and perimeter of the translated partition at the requested offsets.
// Closed-form in x + t*w since a translate of a cell partition is again a
// cell partition. Requires |w| <= 5 and every offset in [-1, 1].
std::vector<TranslationSample> translation_scan(const PlanePoint& x,
                                                const PlanePoint& w,
                                                const std::vector<double>& ts);

// Analytic variation data: dV = Mw and dA = <lambda, Mw> from the constant
// interface normals; d2V and d2A integrate <w,z> against the weighted
// interface measure; Q collapses to -sum <w,n_ij>^2 A_ij because the
// curvature terms cancel exactly against <lambda, d2V>.
VariationReport index_form_translation(const PlanePoint& x, const PlanePoint& w);

}  // namespace tripod
