#pragma once

namespace tripod::gauss {

// Standard normal density (2pi)^(-1/2) exp(-x^2/2).
double pdf(double x);

// Standard normal CDF, evaluated through erfc so the lower tail keeps full
// relative accuracy; absolute error stays at the 1e-16 level everywhere.
double cdf(double x);

// Upper tail 1 - cdf(x), with full relative accuracy for large positive x.
double cdf_upper(double x);

// Inverse CDF on (0, 1): rational initial guess polished by two Newton
// steps on cdf. Throws std::domain_error for p outside (0, 1).
double quantile(double p);

// Isoperimetric profile of a single cell, pdf(quantile(v)) on [0, 1] with
// value 0 at the endpoints. Throws std::domain_error outside [0, 1].
double single_bubble_profile(double v);

// Residual of the profile equation I'' * I = -1, with I'' estimated by a
// central second difference of step h = max(1e-5, 5e-4 * min(v, 1-v)).
// Rejects v within 2e-5 of an endpoint, where v +/- h would leave (0, 1).
double single_bubble_ode_residual(double v);

}  // namespace tripod::gauss
