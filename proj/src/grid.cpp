#include "nlb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlb/kernels.hpp"
#include "nlb/quadrature.hpp"

namespace nlb {
namespace {

double arc(const Metric1D& m, double a, double b, double tol) {
  auto ds = [&m](double x) { return std::sqrt(m.g(x)); };
  return integrate_auto(ds, a, b, tol).value;
}

// Solves arc(m, xi, x) = ds for x in (xi, cap], by bracketed bisection.
// Brackets are local (one cell wide), so plain bisection is robust even
// when xi itself is astronomically large.
double next_node(const Metric1D& m, double xi, double ds, double cap) {
  const double tol = std::max(1e-15, 1e-13 * ds);
  double step = ds / std::sqrt(m.g(xi));
  double hi = std::min(cap, xi + step);
  while (hi < cap && arc(m, xi, hi, tol) < ds) {
    step *= 2.0;
    hi = std::min(cap, xi + step);
  }
  if (hi >= cap && arc(m, xi, cap, tol) <= ds) return cap;
  double lo = xi;
  for (int it = 0; it < 90 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (arc(m, xi, mid, tol) < ds ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<std::size_t> Grid1D::boundary_nodes() const {
  std::vector<std::size_t> b{0};
  if (!right_end_artificial) b.push_back(n_nodes() - 1);
  return b;
}

Grid1D build_grid(const Metric1D& m, std::size_t n_cells, Grading grading,
                  double truncation) {
  if (n_cells < 8)
    throw std::invalid_argument("build_grid: need at least 8 cells");
  double X;
  if (m.has_open_end()) {
    if (!std::isfinite(truncation))
      throw std::invalid_argument(
          "build_grid: metric '" + m.label +
          "' has an open end; a finite truncation is required");
    X = truncation;
  } else {
    X = std::isfinite(truncation) ? truncation : m.x_max;
    if (X > m.x_max)
      throw std::invalid_argument("build_grid: truncation beyond x_max");
  }
  if (!(X > m.x_min))
    throw std::invalid_argument("build_grid: truncation must exceed x_min");

  Grid1D grid;
  grid.metric = m;
  grid.truncation = X;
  grid.right_end_artificial = m.has_open_end();
  grid.grading = grading;

  const std::size_t n = n_cells;
  grid.x.resize(n + 1);
  grid.s.resize(n + 1);
  grid.x[0] = m.x_min;
  grid.s[0] = 0.0;
  if (grading == Grading::coordinate) {
    const double span = X - m.x_min;
    for (std::size_t i = 1; i <= n; ++i)
      grid.x[i] = m.x_min + span * static_cast<double>(i) /
                                static_cast<double>(n);
    grid.x[n] = X;
    const double tol = std::max(1e-15, 1e-13 * span / static_cast<double>(n));
    for (std::size_t i = 1; i <= n; ++i)
      grid.s[i] = grid.s[i - 1] + arc(m, grid.x[i - 1], grid.x[i], tol);
  } else {
    const double S = arc(m, m.x_min, X, 1e-12);
    const double ds = S / static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
      grid.x[i] = i == n ? X : next_node(m, grid.x[i - 1], ds, X);
      grid.s[i] = ds * static_cast<double>(i);
    }
  }

  grid.w.resize(n + 1);
  grid.w[0] = 0.5 * (grid.s[1] - grid.s[0]);
  for (std::size_t i = 1; i < n; ++i)
    grid.w[i] = 0.5 * (grid.s[i + 1] - grid.s[i - 1]);
  grid.w[n] = 0.5 * (grid.s[n] - grid.s[n - 1]);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = grid.s[i + 1] - grid.s[i];
    if (!(h > 0.0))
      throw std::runtime_error("build_grid: degenerate cell (non-monotone "
                               "arclength); check the metric functions");
    grid.max_cell_arclength = std::max(grid.max_cell_arclength, h);
  }
  return grid;
}

Grid2D build_grid(const WarpedSurface2D& surf, std::size_t n_r,
                  std::size_t n_theta) {
  if (n_r < 4 || n_theta < 8)
    throw std::invalid_argument("build_grid: need n_r >= 4, n_theta >= 8");
  Grid2D grid;
  grid.surface = surf;
  grid.n_theta = n_theta;
  grid.dr = surf.r_max / static_cast<double>(n_r);
  grid.dtheta = 2.0 * M_PI / static_cast<double>(n_theta);
  grid.r.resize(n_r + 1);
  for (std::size_t i = 0; i <= n_r; ++i)
    grid.r[i] = surf.r_max * static_cast<double>(i) / static_cast<double>(n_r);

  grid.w.resize(n_r + 1);
  grid.ct.resize(n_r + 1);
  grid.cr.resize(n_r);
  const double tol = 1e-13 * grid.dr;
  double max_warp = 0.0;
  for (std::size_t i = 0; i <= n_r; ++i) {
    const double a = i == 0 ? 0.0 : grid.r[i] - 0.5 * grid.dr;
    const double b = i == n_r ? surf.r_max : grid.r[i] + 0.5 * grid.dr;
    const double vol = integrate(surf.warp, a, b, tol).value;
    const double inv = integrate([&surf](double r) { return 1.0 / surf.warp(r); },
                                 a, b, tol)
                           .value;
    if (!(vol > 0.0))
      throw std::invalid_argument("build_grid: warp must be positive");
    grid.w[i] = vol * grid.dtheta;
    grid.ct[i] = inv / grid.dtheta;
    max_warp = std::max(max_warp, surf.warp(grid.r[i]));
  }
  for (std::size_t i = 0; i < n_r; ++i)
    grid.cr[i] = surf.warp(grid.r[i] + 0.5 * grid.dr) * grid.dtheta / grid.dr;
  grid.sigma = surf.warp(0.0) * grid.dtheta;
  grid.max_cell_arclength = std::max(grid.dr, max_warp * grid.dtheta);

  grid.wfull.resize(grid.n_nodes());
  for (std::size_t i = 0; i <= n_r; ++i)
    for (std::size_t j = 0; j < n_theta; ++j)
      grid.wfull[grid.index(i, j)] = grid.w[i];
  return grid;
}

double lp_norm(const Grid1D& grid, std::span<const double> f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  return std::pow(kernels::sum_pow(grid.w, f, p), 1.0 / p);
}

double lp_norm(const Grid2D& grid, std::span<const double> f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  return std::pow(kernels::sum_pow(grid.wfull, f, p), 1.0 / p);
}

double weighted_inner(const Grid1D& grid, std::span<const double> f,
                      std::span<const double> g) {
  return kernels::dot3(grid.w, f, g);
}

double weighted_inner(const Grid2D& grid, std::span<const double> f,
                      std::span<const double> g) {
  return kernels::dot3(grid.wfull, f, g);
}

std::vector<double> gradient_norm(const Grid1D& grid,
                                  std::span<const double> f) {
  const std::size_t n = grid.n_nodes();
  std::vector<double> out(n);
  const auto& s = grid.s;
  out[0] = std::abs((f[1] - f[0]) / (s[1] - s[0]));
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = std::abs((f[i + 1] - f[i - 1]) / (s[i + 1] - s[i - 1]));
  out[n - 1] = std::abs((f[n - 1] - f[n - 2]) / (s[n - 1] - s[n - 2]));
  return out;
}

std::vector<double> gradient_norm(const Grid2D& grid,
                                  std::span<const double> f) {
  const std::size_t nr = grid.n_r();
  const std::size_t m = grid.n_theta;
  std::vector<double> out(grid.n_nodes());
  for (std::size_t i = 0; i <= nr; ++i) {
    const double phi = grid.surface.warp(grid.r[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t jl = j == 0 ? m - 1 : j - 1;
      const std::size_t jr = j + 1 == m ? 0 : j + 1;
      double fr;
      if (i == 0)
        fr = (f[grid.index(1, j)] - f[grid.index(0, j)]) / grid.dr;
      else if (i == nr)
        fr = (f[grid.index(nr, j)] - f[grid.index(nr - 1, j)]) / grid.dr;
      else
        fr = (f[grid.index(i + 1, j)] - f[grid.index(i - 1, j)]) /
             (2.0 * grid.dr);
      const double ft = (f[grid.index(i, jr)] - f[grid.index(i, jl)]) /
                        (2.0 * grid.dtheta * phi);
      out[grid.index(i, j)] = std::hypot(fr, ft);
    }
  }
  return out;
}

std::vector<double> normal_derivative(const Grid1D& grid,
                                      std::span<const double> f) {
  std::vector<double> out;
  const auto& s = grid.s;
  const std::size_t n = grid.n_nodes();
  // left end: outward direction is decreasing arclength
  out.push_back(-lagrange_deriv(s[0], s[1], s[2], f[0], f[1], f[2]));
  if (!grid.right_end_artificial)
    out.push_back(lagrange_deriv(s[n - 1], s[n - 2], s[n - 3], f[n - 1],
                                 f[n - 2], f[n - 3]));
  return out;
}

std::vector<double> normal_derivative(const Grid2D& grid,
                                      std::span<const double> f) {
  std::vector<double> out(grid.n_theta);
  for (std::size_t j = 0; j < grid.n_theta; ++j) {
    const double fr =
        (-3.0 * f[grid.index(0, j)] + 4.0 * f[grid.index(1, j)] -
         f[grid.index(2, j)]) /
        (2.0 * grid.dr);
    out[j] = -fr;  // outward normal points in -r
  }
  return out;
}

}  // namespace nlb
