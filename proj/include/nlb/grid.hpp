#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlb/metric.hpp"
#include "nlb/surface.hpp"

namespace nlb {

enum class Grading {
  coordinate,  // uniform in the coordinate x
  arclength,   // uniform in Riemannian arclength
};

/// Node-centered finite-volume grid on a (possibly truncated) metric
/// interval. Cell interfaces sit at arclength midpoints between nodes, so
/// the cell measure is w_i = (s_{i+1} - s_{i-1}) / 2 (half cells at the
/// ends) and the interface coupling is 1 / (s_{i+1} - s_i). Placing the
/// interfaces at arclength rather than coordinate midpoints is what keeps
/// the scheme pointwise second order on graded grids.
struct Grid1D {
  Metric1D metric;
  double truncation = 0.0;       // coordinate of the right end of the grid
  bool right_end_artificial = false;  // true when the metric's end is open
  Grading grading = Grading::coordinate;

  std::vector<double> x;  // nodes, size n_cells + 1
  std::vector<double> s;  // arclength from x_min at each node
  std::vector<double> w;  // arc-cell measure at each node
  double max_cell_arclength = 0.0;  // max interface spacing in arclength

  std::size_t n_nodes() const { return x.size(); }
  std::size_t n_cells() const { return x.size() - 1; }
  /// True boundary nodes (x_min always; the right end only if not artificial).
  std::vector<std::size_t> boundary_nodes() const;
};

/// Builds a 1D grid. `truncation` is required (finite) when the metric has
/// an open end; for a compact metric it defaults to x_max.
Grid1D build_grid(const Metric1D& m, std::size_t n_cells, Grading grading,
                  double truncation = std::numeric_limits<double>::infinity());

/// Tensor grid on a warped half-cylinder: uniform in r (already arclength)
/// and theta, periodic in theta. Fields are stored row-major with node
/// (i, j) at index i * n_theta + j, i = 0..n_r.
struct Grid2D {
  WarpedSurface2D surface;
  std::vector<double> r;      // radial nodes, size n_r + 1
  std::size_t n_theta = 0;    // angular cells (= nodes, periodic)
  double dr = 0.0, dtheta = 0.0;

  std::vector<double> w;      // per-row cell measure (includes dtheta)
  std::vector<double> wfull;  // per-node measure, w[i] repeated over theta
  std::vector<double> cr;     // radial interface coupling, size n_r
  std::vector<double> ct;     // angular interface coupling per row, size n_r+1
  double sigma = 0.0;         // boundary measure per node on the r=0 circle
  double max_cell_arclength = 0.0;

  std::size_t n_r() const { return r.size() - 1; }
  std::size_t n_nodes() const { return r.size() * n_theta; }
  std::size_t index(std::size_t i, std::size_t j) const {
    return i * n_theta + j;
  }
  double theta(std::size_t j) const { return dtheta * static_cast<double>(j); }
};

Grid2D build_grid(const WarpedSurface2D& surf, std::size_t n_r,
                  std::size_t n_theta);

/// (sum_i w_i |f_i|^p)^(1/p), p >= 1.
double lp_norm(const Grid1D& grid, std::span<const double> f, double p);
double lp_norm(const Grid2D& grid, std::span<const double> f, double p);

/// Weighted inner product sum_i w_i f_i g_i.
double weighted_inner(const Grid1D& grid, std::span<const double> f,
                      std::span<const double> g);
double weighted_inner(const Grid2D& grid, std::span<const double> f,
                      std::span<const double> g);

/// Pointwise Riemannian gradient magnitude (centered differences in
/// arclength; one-sided at non-periodic ends).
std::vector<double> gradient_norm(const Grid1D& grid,
                                  std::span<const double> f);
std::vector<double> gradient_norm(const Grid2D& grid,
                                  std::span<const double> f);

/// Outward normal derivative at each true boundary node (second-order
/// one-sided stencil in arclength).
std::vector<double> normal_derivative(const Grid1D& grid,
                                      std::span<const double> f);
std::vector<double> normal_derivative(const Grid2D& grid,
                                      std::span<const double> f);

/// Derivative at s0 of the quadratic through (s0,f0), (s1,f1), (s2,f2);
/// the one-sided end stencil used for normal derivatives.
inline double lagrange_deriv(double s0, double s1, double s2, double f0,
                             double f1, double f2) {
  return f0 * (2.0 * s0 - s1 - s2) / ((s0 - s1) * (s0 - s2)) +
         f1 * (s0 - s2) / ((s1 - s0) * (s1 - s2)) +
         f2 * (s0 - s1) / ((s2 - s0) * (s2 - s1));
}

}  // namespace nlb
