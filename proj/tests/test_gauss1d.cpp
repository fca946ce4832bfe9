#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tripod/gauss1d.hpp"

using namespace tripod::gauss;

TEST_CASE("density: closed-form values and symmetry") {
  CHECK(std::abs(pdf(0.0) - 0.3989422804014327) <= 1e-16);
  CHECK(pdf(1.0) == pdf(-1.0));
  CHECK(std::abs(pdf(2.0) * std::sqrt(2.0 * M_PI) * std::exp(2.0) - 1.0) <=
        1e-14);
  CHECK(pdf(0.0) > pdf(0.1));
}

TEST_CASE("cdf: reference values, reflection, monotonicity") {
  CHECK(cdf(0.0) == 0.5);
  CHECK(std::abs(cdf(8.0) - 1.0) <= 1e-15);

  // Against the erf-based reference, and the reflection identity.
  double prev = -1.0;
  for (int i = -80; i <= 80; ++i) {
    const double x = 0.1 * i;
    CHECK(std::abs(cdf(x) - oracle::cdf_via_erf(x)) <= 1e-15);
    CHECK(std::abs(cdf(x) + cdf(-x) - 1.0) <= 1e-15);
    CHECK(cdf(x) > prev);
    prev = cdf(x);
  }

  // Lower tail keeps relative accuracy.
  CHECK(std::abs(cdf(-6.0) / 9.865876450376946e-10 - 1.0) < 1e-13);
  CHECK(std::abs(cdf_upper(6.0) / 9.865876450376946e-10 - 1.0) < 1e-13);
}

TEST_CASE("quantile: fixed points and round trips") {
  CHECK(quantile(0.5) == 0.0);
  CHECK(std::abs(quantile(cdf(1.0)) - 1.0) <= 1e-12);

  // Forward round trip over the central range.
  for (int i = 1; i <= 998; ++i) {
    const double p = 0.001 * i;
    CHECK(std::abs(cdf(quantile(p)) - p) <= 1e-13);
  }

  // Against the bisection oracle where p carries full relative precision.
  for (double p : {1e-6, 1e-3, 0.3}) {
    CHECK(std::abs(quantile(p) - oracle::bisect_quantile(p)) <= 1e-12);
  }

  // p = 0.999999: the double spacing near 1 already quantizes x at the
  // few-1e-11 scale, so the x-space check gets a looser band; the round
  // trip in p stays tight.
  const double p_hi = 0.999999;
  const double x_hi = quantile(p_hi);
  CHECK(std::isfinite(x_hi));
  CHECK(std::abs(cdf(x_hi) - p_hi) <= 1e-11);
  CHECK(std::abs(x_hi - oracle::bisect_quantile(p_hi)) <= 1e-9);

  double prev = quantile(0.01);
  for (int i = 2; i <= 99; ++i) {
    const double q = quantile(0.01 * i);
    CHECK(q > prev);
    prev = q;
  }

  CHECK_THROWS_AS(quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(quantile(-0.5), std::domain_error);
  CHECK_THROWS_AS(quantile(1.5), std::domain_error);
}

TEST_CASE("single-bubble profile: values, symmetry, concavity") {
  CHECK(std::abs(single_bubble_profile(0.5) - 0.3989422804014327) <= 1e-16);
  CHECK(single_bubble_profile(0.0) == 0.0);
  CHECK(single_bubble_profile(1.0) == 0.0);

  for (double v : {0.1, 0.25, 0.33, 0.4, 0.45}) {
    CHECK(std::abs(single_bubble_profile(v) - single_bubble_profile(1.0 - v)) <=
          1e-15);
  }

  // Midpoint concavity on a spread of pairs.
  const std::vector<std::pair<double, double>> pairs = {
      {0.05, 0.4}, {0.1, 0.9}, {0.2, 0.5}, {0.3, 0.8}, {0.45, 0.55}};
  for (const auto& [a, b] : pairs) {
    const double mid = single_bubble_profile(0.5 * (a + b));
    const double chord =
        0.5 * (single_bubble_profile(a) + single_bubble_profile(b));
    CHECK(mid >= chord);
  }

  CHECK_THROWS_AS(single_bubble_profile(-0.1), std::domain_error);
  CHECK_THROWS_AS(single_bubble_profile(1.1), std::domain_error);
}

TEST_CASE("profile derivative matches -quantile by central differences") {
  for (int i = 1; i <= 99; ++i) {
    const double v = 0.01 * i;
    const double h = std::max(1e-5, 1e-3 * std::min(v, 1.0 - v));
    const double fd = oracle::central_diff(
        [](double u) { return single_bubble_profile(u); }, v, h);
    CHECK(std::abs(fd - (-quantile(v))) <= 1e-6);
  }
}

TEST_CASE("profile second-derivative equation residual") {
  CHECK(std::abs(single_bubble_ode_residual(0.5)) <= 1e-7);
  CHECK(std::abs(single_bubble_ode_residual(0.2)) <= 1e-5);
  CHECK(std::abs(single_bubble_ode_residual(0.8) -
                 single_bubble_ode_residual(0.2)) <= 1e-8);

  // 97 interior points.
  for (int i = 1; i <= 97; ++i) {
    const double v = i / 98.0;
    CHECK(std::abs(single_bubble_ode_residual(v)) <= 1e-5);
  }

  CHECK_THROWS_AS(single_bubble_ode_residual(1e-5), std::domain_error);
  CHECK_THROWS_AS(single_bubble_ode_residual(1.0 - 1e-5), std::domain_error);
  CHECK_THROWS_AS(single_bubble_ode_residual(0.0), std::domain_error);
}
