#pragma once

#include "nlb/surface.hpp"

namespace nlb {

/// Width of the boundary collar used by the retraction machinery.
/// The retraction is the identity outside distance delta/2 from the
/// boundary and collapses everything within delta/4 onto it.
struct SmoothingParams {
  double delta = 0.5;
};

/// Quintic smoothstep S on [0,1]: S(0)=0, S(1)=1, S'(0)=S'(1)=0,
/// monotone, sup S' = 1.875 at the midpoint. Clamped outside [0,1].
double smoothstep(double t);
double smoothstep_deriv(double t);
/// Running integral of S from 0, extended affinely (slope 1) past t = 1.
double smoothstep_integral(double t);

/// Radial cutoff profile: 1 on [0,1], descends to 0 over [1,2], 0 beyond.
double cutoff_profile(double u);
double cutoff_profile_deriv(double u);
/// Lipschitz constant of cutoff_profile (attained mid-descent).
inline constexpr double kCutoffProfileLip = 1.875;

/// Collapsing reparametrization of boundary distance:
///   h = 0 on [0, delta/4],  h(s) = s on [delta/2, inf),  0 <= h' <= 2.5,
///   h <= s everywhere, and h is C^2.
/// The slope must briefly exceed 1 so the lost quarter-collar of length can
/// be made up before delta/2; the profile plateaus at 2.5.
double smoothing_h(double s, const SmoothingParams& sp);
double smoothing_h_deriv(double s, const SmoothingParams& sp);
inline constexpr double kSmoothingSlopeMax = 2.5;

struct SurfacePoint {
  double r = 0.0;
  double theta = 0.0;
};

/// Fermi-coordinate retraction tau(r, theta) = (h(r), theta).
SurfacePoint fermi_retraction(const WarpedSurface2D& surf,
                              const SmoothingParams& sp, SurfacePoint p);

/// Operator norm of d(tau) at radius r: max of the radial stretch h'(r)
/// and the angular stretch warp(h(r)) / warp(r).
double fermi_differential_norm(const WarpedSurface2D& surf,
                               const SmoothingParams& sp, double r);

}  // namespace nlb
