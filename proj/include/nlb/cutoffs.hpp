#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlb/grid.hpp"
#include "nlb/neumann_operator.hpp"
#include "nlb/smoothing.hpp"

namespace nlb {

/// One member chi_n = psi(rho(o, .)/n) of a first-order cut-off family,
/// together with the measured quantities the verification suites consume.
/// rho is the geodesic distance field from the base point; plateau holds
/// the nodes where chi is exactly 1.
struct CutoffSequence {
  std::size_t n = 0;
  std::vector<double> chi;
  std::vector<double> rho;
  double sup_gradient = 0.0;   // max interface slope |d chi / ds|
  double boundary_flux = 0.0;  // max |normal derivative| at boundary nodes
  std::vector<std::size_t> plateau;
  double plateau_measure = 0.0;
  double support_radius = 0.0;  // max rho over supp chi
  bool truncated_domain = false;
};

/// Cut-off at index n >= 1 centered at node o_node (1D: rho is the
/// arclength distance |s - s_o|). Throws std::domain_error for n = 0.
/// sup_gradient is bounded by Lip(psi)/n times the discrete Lipschitz
/// constant of rho, which is exactly 1 in arclength.
CutoffSequence build_first_order_cutoffs(const Grid1D& grid,
                                         std::size_t o_node, std::size_t n);

/// 2D version with the base point on the boundary circle at angle index
/// j0; rho comes from boundary_point_distance. The overload taking a
/// precomputed rho shares one eikonal solve across the whole family.
CutoffSequence build_first_order_cutoffs(const Grid2D& grid, std::size_t j0,
                                         std::size_t n);
CutoffSequence build_first_order_cutoffs(const Grid2D& grid,
                                         std::vector<double> rho,
                                         std::size_t n);

/// Composes chi with the collar retraction tau (radius r is replaced by
/// smoothing_h(r)), making the normal derivative vanish at the boundary.
/// Guarantees checked here (violations are construction bugs and throw
/// std::logic_error):
///   - boundary_flux <= 1e-10 (the first three rows carry equal values);
///   - chi equals the input exactly wherever rho(., boundary) >= delta/2.
/// The gradient inflation factor (<= the differential norm of tau) and
/// plateau preservation are measured by the callers, not asserted here.
/// Throws ResolutionError when [0, delta/2] spans fewer than 8 cells.
CutoffSequence neumannize(const Grid2D& grid, const CutoffSequence& tilde,
                          const SmoothingParams& sp);

/// 1D version: the retraction acts on the arclength distance to each true
/// boundary end. Collars must not overlap.
CutoffSequence neumannize(const Grid1D& grid, const CutoffSequence& tilde,
                          const SmoothingParams& sp);

struct DensityRow {
  double delta = 0.0;
  double norm_err = 0.0;  // ||f - f o tau||_p
  double grad_err = 0.0;  // ||grad(f - f o tau)||_p
  double total = 0.0;
};

struct DensityTable {
  double p = 2.0;
  double f_norm = 0.0;  // ||f||_p + ||grad f||_p
  std::vector<DensityRow> rows;
};

/// W^{1,p} distance between f and its collar retractions f o tau_delta,
/// one row per delta (decreasing). f is evaluated exactly at the retracted
/// radius, so the table isolates the retraction error from interpolation.
/// The retracted fields are collar-constant, hence have zero boundary
/// flux; that is asserted internally. Throws ResolutionError when the grid
/// does not resolve the smallest collar with 8 cells, std::invalid_argument
/// for p <= 1 or a non-decreasing delta list.
DensityTable density_experiment(const Grid2D& grid,
                                const std::function<double(double, double)>& f,
                                double p, std::vector<double> deltas);

struct InterpolationResult {
  double lhs = 0.0;        // ||grad f||_p^2
  double rhs = 0.0;        // (p-1)^{-1} ||Hf||_p ||f||_p
  double allowance = 0.0;  // relative slack granted to the rhs
  bool holds = false;
};

/// Checks ||grad f||_p^2 <= (p-1)^{-1} ||Hf||_p ||f||_p for p in (1, 2] on
/// a zero-flux grid function. The gradient norm is taken over interfaces,
/// which at p = 2 makes the left side the Dirichlet form exactly, so the
/// equality case carries no discretization slack. The allowance
/// 0.02 + 2 h covers the boundary-row quadrature mismatch at p < 2.
/// Functions whose normal derivative exceeds 1e-2 * max(1, max|f|) are
/// outside the admissible class and rejected with std::invalid_argument.
InterpolationResult interpolation_check(const Grid1D& grid,
                                        const NeumannOperator& op,
                                        std::span<const double> f, double p);

/// (sum over interfaces ds |df/ds|^p)^(1/p); the p-version of the energy
/// quadrature used by interpolation_check.
double interface_gradient_lp(const Grid1D& grid, std::span<const double> f,
                             double p);

}  // namespace nlb
