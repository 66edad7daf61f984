#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "nlb/metric.hpp"
#include "nlb/quadrature.hpp"
#include "nlb/registry.hpp"
#include "nlb/rng.hpp"
#include "nlb/smoothing.hpp"

using namespace nlb;

TEST_CASE("quadrature reproduces exact integrals") {
  // polynomial exactness (the 15-point rule is exact through degree 22)
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::pow(x, 22); }, 0.0, 1.0).value ==
        doctest::Approx(1.0 / 23.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  // orientation and degenerate interval
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0).value ==
        doctest::Approx(-0.5));
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("log substitution handles integrands spanning hundreds of decades") {
  const double big = std::exp(200.0);
  const auto inv = [](double x) { return 1.0 / x; };
  CHECK(integrate_log(inv, 1.0, big).value ==
        doctest::Approx(200.0).epsilon(1e-12));
  CHECK(integrate_auto(inv, 1.0, big).value ==
        doctest::Approx(200.0).epsilon(1e-12));
  // agrees with plain bisection on a moderate span
  CHECK(integrate_log(inv, 1.0, 100.0).value ==
        doctest::Approx(integrate(inv, 1.0, 100.0).value).epsilon(1e-12));
}

TEST_CASE("geodesic distances match closed forms") {
  Rng rng(2026);
  for (const auto& entry : metric_registry()) {
    REQUIRE(entry.closed_distance);
    const double lo = entry.metric.x_min;
    const double hi = std::isfinite(entry.metric.x_max)
                          ? entry.metric.x_max
                          : entry.default_truncation;
    for (int k = 0; k < 12; ++k) {
      const double p = rng.uniform(lo, hi);
      const double q = rng.uniform(lo, hi);
      const double want = entry.closed_distance(p, q);
      const double got = geodesic_distance(entry.metric, p, q);
      INFO(entry.metric.label, " p=", p, " q=", q);
      CHECK(got == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("finite-length example: distance from 1 to 2 is exactly 1/2") {
  const auto& e = find_metric("x4_example");
  CHECK(std::abs(geodesic_distance(e.metric, 1.0, 2.0) - 0.5) < 1e-9);
  // total length is 1, approached but never attained
  CHECK(geodesic_distance(e.metric, 1.0, 1e8) ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("distance rejects coordinates outside the domain") {
  const auto& e = find_metric("x4_example");
  CHECK_THROWS_AS(geodesic_distance(e.metric, 0.5, 2.0),
                  std::invalid_argument);
  const auto& c = find_metric("flat_interval");
  CHECK_THROWS_AS(geodesic_distance(c.metric, 0.0, 4.0),
                  std::invalid_argument);
}

TEST_CASE("completeness classification matches the catalog") {
  for (const auto& entry : metric_registry()) {
    const auto rep = is_complete(entry.metric);
    INFO(entry.metric.label, ": ", rep.evidence);
    CHECK(rep.decided);
    CHECK(rep.complete == entry.expected_complete);
    CHECK(rep.verdict == (entry.expected_complete ? "complete" : "incomplete"));
  }
}

TEST_CASE("completeness fits pick the structurally right model") {
  CHECK(is_complete(find_metric("inv_x2").metric).best_model == "log");
  CHECK(is_complete(find_metric("x_squared").metric).best_model == "power");
  CHECK(is_complete(find_metric("x4_example").metric).best_model == "bounded");
  const auto rep = is_complete(find_metric("flat_halfline").metric);
  CHECK(rep.best_model == "power");
  // partial integrals recorded for the report
  CHECK(rep.cutoffs.size() == 6);
  CHECK(rep.partials.back() == doctest::Approx(1e6).epsilon(1e-10));
}

TEST_CASE("smoothstep basics") {
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smoothstep_deriv(0.5) == doctest::Approx(1.875).epsilon(1e-15));
  // monotone, with derivative never above the midpoint slope
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = k / 200.0;
    CHECK(smoothstep(t) >= prev);
    CHECK(smoothstep_deriv(t) <= 1.875 + 1e-12);
    prev = smoothstep(t);
  }
  // integral matches quadrature of the step itself
  for (double t : {0.2, 0.5, 0.9, 1.0, 1.7}) {
    const double want =
        integrate([](double u) { return smoothstep(u); }, 0.0, t).value;
    CHECK(smoothstep_integral(t) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cutoff profile: plateau, descent, compact support") {
  CHECK(cutoff_profile(0.3) == 1.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(2.0) == 0.0);
  CHECK(cutoff_profile(5.0) == 0.0);
  CHECK(cutoff_profile(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (int k = 0; k <= 300; ++k) {
    const double u = 3.0 * k / 300.0;
    CHECK(std::abs(cutoff_profile_deriv(u)) <= kCutoffProfileLip + 1e-12);
    CHECK(cutoff_profile(u) >= 0.0);
    CHECK(cutoff_profile(u) <= 1.0);
  }
}

TEST_CASE("collapsing reparametrization h") {
  const SmoothingParams sp{0.4};
  // frozen value, from integrating the slope profile over half the ramp:
  // quarter-ramp rise contributes K/8, then the plateau K*(t - 1/4)
  CHECK(smoothing_h(0.15, sp) == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK(smoothing_h(0.05, sp) == 0.0);
  CHECK(smoothing_h(0.1, sp) == 0.0);
  CHECK(smoothing_h(0.2, sp) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(smoothing_h(0.35, sp) == 0.35);
  for (int k = 0; k <= 400; ++k) {
    const double s = 0.5 * k / 400.0;
    const double hp = smoothing_h_deriv(s, sp);
    CHECK(hp >= 0.0);
    CHECK(hp <= kSmoothingSlopeMax + 1e-12);
    CHECK(smoothing_h(s, sp) <= s + 1e-15);
  }
  // h is the integral of its reported derivative
  for (double s : {0.12, 0.15, 0.18, 0.25}) {
    const double want =
        integrate([&sp](double u) { return smoothing_h_deriv(u, sp); }, 0.0, s)
            .value;
    CHECK(smoothing_h(s, sp) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("fermi retraction stays on the surface and contracts mildly") {
  const auto& flat = find_surface("flat_cylinder").surface;
  const auto& warped = find_surface("cosh_cylinder").surface;
  const SmoothingParams sp{0.4};
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto p = fermi_retraction(warped, sp, {r, 1.0});
    CHECK(p.theta == 1.0);
    CHECK(p.r <= r + 1e-15);
    CHECK(p.r >= 0.0);
    CHECK(fermi_differential_norm(flat, sp, r) <=
          kSmoothingSlopeMax + 1e-12);
    CHECK(fermi_differential_norm(warped, sp, r) <= 6.0);
  }
  // identity far from the boundary
  const auto q = fermi_retraction(warped, sp, {0.9, 2.5});
  CHECK(q.r == 0.9);
}
