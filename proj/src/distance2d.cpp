#include "nlb/distance2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nlb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSweepTol = 1e-12;
constexpr int kMaxOuter = 200;

// Godunov update from upwind values a (radial, step p) and b (angular,
// step q). Falls back to the smaller one-sided update when the quadratic
// has no causal root.
double godunov_update(double a, double p, double b, double q) {
  const double one_sided = std::min(a + p, b + q);
  if (!(std::isfinite(a) && std::isfinite(b))) return one_sided;
  const double disc = p * p + q * q - (a - b) * (a - b);
  if (disc <= 0.0) return one_sided;
  const double t =
      (a * q * q + b * p * p + p * q * std::sqrt(disc)) / (p * p + q * q);
  if (t < std::max(a, b)) return one_sided;
  return t;
}

}  // namespace

double wrapped_angle(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 2.0 * 3.14159265358979323846);
  if (d > 3.14159265358979323846) d = 2.0 * 3.14159265358979323846 - d;
  return d;
}

std::vector<double> boundary_point_distance(const Grid2D& grid,
                                            std::size_t j0) {
  const std::size_t nr = grid.n_r();
  const std::size_t nt = grid.n_theta;
  if (j0 >= nt) throw std::invalid_argument("source angle index off grid");

  std::vector<double> T(grid.n_nodes(), kInf);
  std::vector<char> locked(grid.n_nodes(), 0);

  // Near field: within a few cells the metric is flat to O(h^2); the
  // angular leg is measured at the mean warp along the chord.
  const std::size_t seed = std::min<std::size_t>(3, nr);
  const std::size_t seed_t = std::min<std::size_t>(3, nt / 2);
  for (std::size_t i = 0; i <= seed; ++i) {
    for (std::size_t dj = 0; dj <= seed_t; ++dj) {
      for (int sgn : {-1, 1}) {
        if (dj == 0 && sgn < 0) continue;
        const std::size_t j = (j0 + nt + sgn * static_cast<int>(dj)) % nt;
        const double arc =
            static_cast<double>(dj) * grid.dtheta *
            grid.surface.warp(0.5 * grid.r[i]);
        const std::size_t id = grid.index(i, j);
        T[id] = std::hypot(grid.r[i], arc);
        locked[id] = 1;
      }
    }
  }

  std::vector<double> q_row(nr + 1);
  for (std::size_t i = 0; i <= nr; ++i)
    q_row[i] = grid.surface.warp(grid.r[i]) * grid.dtheta;

  const auto relax = [&](std::size_t i, std::size_t j) {
    const std::size_t id = grid.index(i, j);
    if (locked[id]) return 0.0;
    double a = kInf;
    if (i > 0) a = std::min(a, T[grid.index(i - 1, j)]);
    if (i < nr) a = std::min(a, T[grid.index(i + 1, j)]);
    const double b = std::min(T[grid.index(i, (j + 1) % nt)],
                              T[grid.index(i, (j + nt - 1) % nt)]);
    const double t = godunov_update(a, grid.dr, b, q_row[i]);
    if (t < T[id]) {
      const double change = T[id] - t;
      T[id] = t;
      return std::isfinite(change) ? change : kInf;
    }
    return 0.0;
  };

  for (int outer = 0; outer < kMaxOuter; ++outer) {
    double worst = 0.0;
    for (int ord = 0; ord < 4; ++ord) {
      const bool i_up = (ord & 1) == 0;
      const bool j_up = (ord & 2) == 0;
      for (std::size_t ii = 0; ii <= nr; ++ii) {
        const std::size_t i = i_up ? ii : nr - ii;
        for (std::size_t jj = 0; jj < nt; ++jj) {
          const std::size_t j = j_up ? jj : nt - 1 - jj;
          worst = std::max(worst, relax(i, j));
        }
      }
    }
    if (worst < kSweepTol) return T;
  }
  throw std::runtime_error("eikonal sweep failed to converge");
}

}  // namespace nlb
