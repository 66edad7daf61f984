#pragma once

#include <cstddef>
#include <vector>

#include "nlb/grid.hpp"

namespace nlb {

/// Geodesic distance field from the boundary point (r = 0, theta_{j0}) to
/// every grid node, within the truncated surface.
///
/// Solved as the eikonal equation (d_r T)^2 + (d_theta T / warp)^2 = 1 by
/// Godunov upwinding with fast sweeping (four index orderings, repeated to
/// a fixed point; the periodic theta direction just costs extra passes).
/// A graph-Dijkstra distance was rejected: with cell aspect ratios around
/// warp*dtheta/dr ~ 10 any fixed chord stencil overshoots near-radial
/// directions by a resolution-independent factor, while the upwind solution
/// is consistent and first-order accurate.
///
/// A small disc around the source is seeded from the locally flat metric
/// (error O(h^3), below scheme order) and kept fixed during the sweeps.
std::vector<double> boundary_point_distance(const Grid2D& grid,
                                            std::size_t j0);

/// Angular separation |a - b| reduced to [0, pi].
double wrapped_angle(double a, double b);

}  // namespace nlb
