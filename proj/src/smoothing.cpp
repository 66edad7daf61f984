#include "nlb/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlb {

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // Clamp: near t = 1 the polynomial can round a hair past 1, and the
  // cut-off invariant 0 <= chi <= 1 is exact, not approximate.
  return std::min(1.0, t * t * t * (10.0 + t * (-15.0 + 6.0 * t)));
}

double smoothstep_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

double smoothstep_integral(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 0.5 + (t - 1.0);
  const double t4 = t * t * t * t;
  return t4 * (2.5 + t * (-3.0 + t));
}

double cutoff_profile(double u) {
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  return 1.0 - smoothstep(u - 1.0);
}

double cutoff_profile_deriv(double u) {
  if (u <= 1.0 || u >= 2.0) return 0.0;
  return -smoothstep_deriv(u - 1.0);
}

namespace {

constexpr double kK = kSmoothingSlopeMax;  // plateau slope, 2.5

// Slope profile on the ramp [delta/4, delta/2], in the local coordinate
// t in [0,1]: rise 0 -> K over the first quarter, hold K over the middle
// half, descend K -> 1 over the last quarter. Chosen so the integral over
// the ramp is exactly delta/4 * 2 = delta/2, i.e. h(delta/2) = delta/2.
double ramp_slope(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 0.25) return kK * smoothstep(4.0 * t);
  if (t <= 0.75) return kK;
  if (t < 1.0) return kK - (kK - 1.0) * smoothstep(4.0 * t - 3.0);
  return 1.0;
}

// Integral of ramp_slope from 0 to t (t in [0,1]), times 1 (unit ramp).
double ramp_integral(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 0.25) return kK * 0.25 * smoothstep_integral(4.0 * t);
  if (t <= 0.75) return kK * 0.125 + kK * (t - 0.25);
  if (t < 1.0)
    return kK * 0.625 + kK * (t - 0.75) -
           (kK - 1.0) * 0.25 * smoothstep_integral(4.0 * t - 3.0);
  return 2.0;  // = K*0.625 + K*0.25 - (K-1)*0.125 with K = 2.5
}

void check_params(const SmoothingParams& sp) {
  if (!(sp.delta > 0.0))
    throw std::invalid_argument("smoothing delta must be positive");
}

}  // namespace

double smoothing_h(double s, const SmoothingParams& sp) {
  check_params(sp);
  const double q = 0.25 * sp.delta;
  if (s <= q) return 0.0;
  if (s >= 2.0 * q) return s;
  return q * ramp_integral((s - q) / q);
}

double smoothing_h_deriv(double s, const SmoothingParams& sp) {
  check_params(sp);
  const double q = 0.25 * sp.delta;
  if (s <= q) return 0.0;
  if (s >= 2.0 * q) return 1.0;
  return ramp_slope((s - q) / q);
}

SurfacePoint fermi_retraction(const WarpedSurface2D& surf,
                              const SmoothingParams& sp, SurfacePoint p) {
  if (!(p.r >= 0.0) || p.r > surf.r_max)
    throw std::invalid_argument("point off the surface '" + surf.label + "'");
  return {smoothing_h(p.r, sp), p.theta};
}

double fermi_differential_norm(const WarpedSurface2D& surf,
                               const SmoothingParams& sp, double r) {
  const double radial = smoothing_h_deriv(r, sp);
  const double angular = surf.warp(smoothing_h(r, sp)) / surf.warp(r);
  return std::max(radial, angular);
}

}  // namespace nlb
