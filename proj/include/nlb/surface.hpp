#pragma once

#include <functional>
#include <string>

namespace nlb {

/// Warped half-cylinder: metric dr^2 + warp(r)^2 dtheta^2 on
/// [0, r_max] x S^1, boundary circle at r = 0. The radial coordinate is
/// already arclength; warp must be positive.
struct WarpedSurface2D {
  std::string label;
  double r_max = 1.0;
  std::function<double(double)> warp;
  std::function<double(double)> warp_prime;
};

}  // namespace nlb
