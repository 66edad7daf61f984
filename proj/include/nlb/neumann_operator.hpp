#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlb/grid.hpp"

namespace nlb {

/// Finite-volume Neumann Laplacian H = W^{-1} L on a grid: L is the graph
/// Laplacian of the interface couplings, W the diagonal of cell measures.
/// H is symmetric in the weighted inner product <f, g>_w = sum w_i f_i g_i,
/// nonnegative, and annihilates constants exactly (when fully Neumann).
///
/// For 1D grids the right (artificial) end can instead be clamped to zero,
/// which drops the last node from the active set; this is the Dirichlet
/// truncation used by the boundary-condition sensitivity probe.
class NeumannOperator {
 public:
  enum class RightEnd { neumann, dirichlet };

  static NeumannOperator assemble(const Grid1D& grid,
                                  RightEnd right = RightEnd::neumann);
  static NeumannOperator assemble(const Grid2D& grid);

  std::size_t size() const { return w_.size(); }
  bool is_2d() const { return m_ > 0; }
  bool dirichlet_right() const { return dirichlet_right_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  void apply_serial(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(const std::vector<double>& in) const;

  /// Active-node measures (the diagonal of W).
  const std::vector<double>& weights() const { return w_; }

  /// <f, g>_w over the active nodes.
  double inner(std::span<const double> f, std::span<const double> g) const;

  /// Energy form <Hf, g>_w evaluated edgewise:
  /// sum over interfaces c_e (f_i - f_j)(g_i - g_j), plus the clamped-edge
  /// term when the right end is Dirichlet. Agrees with inner(apply(f), g)
  /// to roundoff; unlike it, manifestly symmetric and nonnegative.
  double dirichlet_form(std::span<const double> f,
                        std::span<const double> g) const;

  /// Gershgorin upper bound for the spectrum of H (via the symmetrized
  /// representative W^{1/2} H W^{-1/2}).
  double spectral_bound() const;

  /// Symmetric tridiagonal representative T = W^{1/2} H W^{-1/2} (1D only):
  /// diag = H diagonal, offdiag_i = -c_i / sqrt(w_i w_{i+1}).
  void symmetric_tridiagonal(std::vector<double>& diag,
                             std::vector<double>& offdiag) const;

  // Raw pieces, used by the propagators' implicit solvers.
  const std::vector<double>& edge_coupling() const { return c_; }
  const std::vector<double>& laplacian_diag() const { return ldiag_; }
  // 2D layout
  std::size_t theta_count() const { return m_; }
  const std::vector<double>& row_weights() const { return wrow_; }
  const std::vector<double>& radial_coupling() const { return cr_; }
  const std::vector<double>& angular_coupling() const { return ct_; }

 private:
  // weights of active nodes; 1D: edge couplings and L diagonal
  std::vector<double> w_;
  std::vector<double> c_;
  std::vector<double> ldiag_;
  bool dirichlet_right_ = false;
  // 2D
  std::size_t m_ = 0;  // theta count; 0 marks a 1D operator
  std::vector<double> wrow_, cr_, ct_;
};

/// Residual of the product rule at each active node:
///   H(f chi) - chi Hf - f Hchi + 2 <grad f, grad chi>,
/// which vanishes for the continuum operator. The 1/h parts of the
/// zero-flux end rows cancel within the combination, so every entry is
/// consistent; the end rows are still only first-order accurate.
std::vector<double> leibniz_residual_field(const Grid1D& grid,
                                           const NeumannOperator& op,
                                           std::span<const double> f,
                                           std::span<const double> chi);

/// Weighted L2 norm of the product-rule residual over the rows away from
/// the grid ends. Second order in the mesh width for smooth data.
double leibniz_residual(const Grid1D& grid, const NeumannOperator& op,
                        std::span<const double> f,
                        std::span<const double> chi);

/// Defect of the discrete Green identity
///   <-Hf, g>_{w, ends excluded} + sum_i w_i f'(s_i) g'(s_i)
///       = sum_ends (d_nu f) g + O(h).
/// The end rows of the zero-flux operator absorb the boundary flux of f
/// (that is what makes H1 = 0 exact), so the classical boundary term only
/// reappears once those two rows are left out of the inner product. Both
/// ends of the gridded region count as boundary here, including an
/// artificial truncation end.
double green_identity_defect(const Grid1D& grid, const NeumannOperator& op,
                             std::span<const double> f,
                             std::span<const double> g);

}  // namespace nlb
