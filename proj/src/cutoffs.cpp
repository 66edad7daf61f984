#include "nlb/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlb/distance2d.hpp"
#include "nlb/error.hpp"

namespace nlb {
namespace {

constexpr double kFluxCeiling = 1e-10;
constexpr std::size_t kCollarCells = 8;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Shared field extraction once chi and rho are in place.
void finalize_1d(const Grid1D& grid, CutoffSequence& c) {
  c.sup_gradient = 0.0;
  for (std::size_t i = 0; i + 1 < grid.n_nodes(); ++i) {
    const double ds = grid.s[i + 1] - grid.s[i];
    c.sup_gradient =
        std::max(c.sup_gradient, std::fabs(c.chi[i + 1] - c.chi[i]) / ds);
  }
  c.boundary_flux = max_abs(normal_derivative(grid, c.chi));
  c.plateau.clear();
  c.plateau_measure = 0.0;
  c.support_radius = 0.0;
  for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
    if (c.chi[i] == 1.0) {
      c.plateau.push_back(i);
      c.plateau_measure += grid.w[i];
    }
    if (c.chi[i] > 0.0) c.support_radius = std::max(c.support_radius, c.rho[i]);
  }
  c.truncated_domain = grid.right_end_artificial;
}

void finalize_2d(const Grid2D& grid, CutoffSequence& c) {
  const std::size_t nr = grid.n_r();
  const std::size_t nt = grid.n_theta;
  c.sup_gradient = 0.0;
  for (std::size_t i = 0; i <= nr; ++i) {
    const double q = grid.surface.warp(grid.r[i]) * grid.dtheta;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t id = grid.index(i, j);
      if (i < nr)
        c.sup_gradient =
            std::max(c.sup_gradient,
                     std::fabs(c.chi[grid.index(i + 1, j)] - c.chi[id]) /
                         grid.dr);
      c.sup_gradient = std::max(
          c.sup_gradient,
          std::fabs(c.chi[grid.index(i, (j + 1) % nt)] - c.chi[id]) / q);
    }
  }
  c.boundary_flux = max_abs(normal_derivative(grid, c.chi));
  c.plateau.clear();
  c.plateau_measure = 0.0;
  c.support_radius = 0.0;
  for (std::size_t id = 0; id < grid.n_nodes(); ++id) {
    if (c.chi[id] == 1.0) {
      c.plateau.push_back(id);
      c.plateau_measure += grid.wfull[id];
    }
    if (c.chi[id] > 0.0)
      c.support_radius = std::max(c.support_radius, c.rho[id]);
  }
  c.truncated_domain = true;  // the cylinder is always a truncation in r
}

// Linear interpolation of a grid function along arclength (1D).
double interp_s(const Grid1D& grid, std::span<const double> f, double s) {
  const auto& sv = grid.s;
  if (s <= sv.front()) return f.front();
  if (s >= sv.back()) return f.back();
  const auto it = std::upper_bound(sv.begin(), sv.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - sv.begin()) - 1;
  const double t = (s - sv[k]) / (sv[k + 1] - sv[k]);
  return f[k] + t * (f[k + 1] - f[k]);
}

}  // namespace

CutoffSequence build_first_order_cutoffs(const Grid1D& grid,
                                         std::size_t o_node, std::size_t n) {
  if (n == 0) throw std::domain_error("cut-off index n must be >= 1");
  if (o_node >= grid.n_nodes())
    throw std::invalid_argument("base node off grid");
  CutoffSequence c;
  c.n = n;
  c.rho.resize(grid.n_nodes());
  c.chi.resize(grid.n_nodes());
  const double so = grid.s[o_node];
  for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
    c.rho[i] = std::fabs(grid.s[i] - so);
    c.chi[i] = cutoff_profile(c.rho[i] / static_cast<double>(n));
  }
  finalize_1d(grid, c);
  return c;
}

CutoffSequence build_first_order_cutoffs(const Grid2D& grid, std::size_t j0,
                                         std::size_t n) {
  return build_first_order_cutoffs(grid, boundary_point_distance(grid, j0),
                                   n);
}

CutoffSequence build_first_order_cutoffs(const Grid2D& grid,
                                         std::vector<double> rho,
                                         std::size_t n) {
  if (n == 0) throw std::domain_error("cut-off index n must be >= 1");
  if (rho.size() != grid.n_nodes())
    throw std::invalid_argument("rho field size mismatch");
  CutoffSequence c;
  c.n = n;
  c.rho = std::move(rho);
  c.chi.resize(grid.n_nodes());
  for (std::size_t i = 0; i < grid.n_nodes(); ++i)
    c.chi[i] = cutoff_profile(c.rho[i] / static_cast<double>(n));
  finalize_2d(grid, c);
  return c;
}

CutoffSequence neumannize(const Grid2D& grid, const CutoffSequence& tilde,
                          const SmoothingParams& sp) {
  const std::size_t nr = grid.n_r();
  const std::size_t nt = grid.n_theta;
  if (tilde.chi.size() != grid.n_nodes())
    throw std::invalid_argument("cut-off does not match the grid");
  if (0.5 * sp.delta < static_cast<double>(kCollarCells) * grid.dr)
    throw ResolutionError(
        "collar [0, delta/2] spans fewer than 8 radial cells (delta = " +
        std::to_string(sp.delta) + ", dr = " + std::to_string(grid.dr) + ")");

  CutoffSequence c;
  c.n = tilde.n;
  c.rho = tilde.rho;
  c.chi.resize(grid.n_nodes());
  for (std::size_t i = 0; i <= nr; ++i) {
    const double h = smoothing_h(grid.r[i], sp);
    if (h == grid.r[i]) {  // identity region: exact copy, no interpolation
      for (std::size_t j = 0; j < nt; ++j)
        c.chi[grid.index(i, j)] = tilde.chi[grid.index(i, j)];
      continue;
    }
    const std::size_t k =
        std::min(static_cast<std::size_t>(h / grid.dr), nr - 1);
    const double t = (h - grid.r[k]) / grid.dr;
    for (std::size_t j = 0; j < nt; ++j)
      c.chi[grid.index(i, j)] =
          tilde.chi[grid.index(k, j)] +
          t * (tilde.chi[grid.index(k + 1, j)] - tilde.chi[grid.index(k, j)]);
  }
  finalize_2d(grid, c);

  if (c.boundary_flux > kFluxCeiling)
    throw std::logic_error("retracted cut-off kept a boundary flux");
  for (std::size_t i = 0; i <= nr; ++i) {
    if (grid.r[i] < 0.5 * sp.delta) continue;
    for (std::size_t j = 0; j < nt; ++j)
      if (c.chi[grid.index(i, j)] != tilde.chi[grid.index(i, j)])
        throw std::logic_error("retraction moved a point outside the collar");
  }
  return c;
}

CutoffSequence neumannize(const Grid1D& grid, const CutoffSequence& tilde,
                          const SmoothingParams& sp) {
  if (tilde.chi.size() != grid.n_nodes())
    throw std::invalid_argument("cut-off does not match the grid");
  const double s0 = grid.s.front();
  const double s1 = grid.s.back();
  const std::vector<std::size_t> walls = grid.boundary_nodes();
  if (walls.size() > 1 && s1 - s0 < sp.delta)
    throw ResolutionError("collars of the two ends overlap");

  CutoffSequence c;
  c.n = tilde.n;
  c.rho = tilde.rho;
  c.chi = tilde.chi;
  for (std::size_t wall : walls) {
    const bool left = wall == 0;
    const double half = 0.5 * sp.delta;
    // Resolution rule: 8 cells across the collar at this end.
    std::size_t cells = 0;
    for (std::size_t i = 0; i + 1 < grid.n_nodes(); ++i) {
      const double d = left ? grid.s[i + 1] - s0 : s1 - grid.s[grid.n_nodes() - 2 - i];
      if (d <= half) ++cells;
    }
    if (cells < kCollarCells)
      throw ResolutionError("collar spans fewer than 8 cells at an end");
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
      const double d = left ? grid.s[i] - s0 : s1 - grid.s[i];
      if (d >= half) continue;
      const double h = smoothing_h(d, sp);
      c.chi[i] = interp_s(grid, tilde.chi, left ? s0 + h : s1 - h);
    }
  }
  finalize_1d(grid, c);
  if (c.boundary_flux > kFluxCeiling)
    throw std::logic_error("retracted cut-off kept a boundary flux");
  return c;
}

DensityTable density_experiment(const Grid2D& grid,
                                const std::function<double(double, double)>& f,
                                double p, std::vector<double> deltas) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("density experiment needs p in (1, inf)");
  if (deltas.empty() || !std::is_sorted(deltas.rbegin(), deltas.rend()) ||
      std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end() ||
      deltas.back() <= 0.0)
    throw std::invalid_argument("delta list must be positive and decreasing");
  if (0.5 * deltas.back() < static_cast<double>(kCollarCells) * grid.dr)
    throw ResolutionError("grid does not resolve the smallest collar");

  const std::size_t nr = grid.n_r();
  const std::size_t nt = grid.n_theta;
  std::vector<double> base(grid.n_nodes());
  for (std::size_t i = 0; i <= nr; ++i)
    for (std::size_t j = 0; j < nt; ++j)
      base[grid.index(i, j)] = f(grid.r[i], grid.theta(j));

  DensityTable table;
  table.p = p;
  table.f_norm =
      lp_norm(grid, base, p) + lp_norm(grid, gradient_norm(grid, base), p);

  std::vector<double> retr(grid.n_nodes()), diff(grid.n_nodes());
  for (double delta : deltas) {
    const SmoothingParams sp{delta};
    for (std::size_t i = 0; i <= nr; ++i) {
      const double h = smoothing_h(grid.r[i], sp);
      for (std::size_t j = 0; j < nt; ++j)
        retr[grid.index(i, j)] = f(h, grid.theta(j));
    }
    if (max_abs(normal_derivative(grid, retr)) > kFluxCeiling)
      throw std::logic_error("retracted field kept a boundary flux");
    for (std::size_t id = 0; id < grid.n_nodes(); ++id)
      diff[id] = base[id] - retr[id];
    DensityRow row;
    row.delta = delta;
    row.norm_err = lp_norm(grid, diff, p);
    row.grad_err = lp_norm(grid, gradient_norm(grid, diff), p);
    row.total = row.norm_err + row.grad_err;
    table.rows.push_back(row);
  }
  return table;
}

double interface_gradient_lp(const Grid1D& grid, std::span<const double> f,
                             double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.n_nodes(); ++i) {
    const double ds = grid.s[i + 1] - grid.s[i];
    acc += ds * std::pow(std::fabs(f[i + 1] - f[i]) / ds, p);
  }
  return std::pow(acc, 1.0 / p);
}

InterpolationResult interpolation_check(const Grid1D& grid,
                                        const NeumannOperator& op,
                                        std::span<const double> f, double p) {
  if (!(p > 1.0) || p > 2.0)
    throw std::invalid_argument("interpolation inequality covers p in (1, 2]");
  if (f.size() != grid.n_nodes() || op.size() != grid.n_nodes())
    throw std::invalid_argument("field does not match the grid");
  const double gate = 1e-2 * std::max(1.0, max_abs(f));
  if (max_abs(normal_derivative(grid, f)) > gate)
    throw std::invalid_argument(
        "normal derivative too large: not in the zero-flux class");

  std::vector<double> hf(f.size());
  op.apply(f, hf);

  InterpolationResult r;
  const double g = interface_gradient_lp(grid, f, p);
  r.lhs = g * g;
  r.rhs = lp_norm(grid, hf, p) * lp_norm(grid, f, p) / (p - 1.0);
  r.allowance = 0.02 + 2.0 * grid.max_cell_arclength;
  // Floor for the degenerate 0 <= 0 case (constants).
  const double floor = 1e-14 * std::max(1.0, max_abs(f)) *
                       std::max(1.0, max_abs(f));
  r.holds = r.lhs <= r.rhs * (1.0 + r.allowance) + floor;
  return r;
}

}  // namespace nlb
