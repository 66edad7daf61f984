#include "nlb/neumann_operator.hpp"

#include <cmath>
#include <stdexcept>

#include "nlb/kernels.hpp"

namespace nlb {

NeumannOperator NeumannOperator::assemble(const Grid1D& grid, RightEnd right) {
  if (right == RightEnd::dirichlet && !grid.right_end_artificial)
    throw std::invalid_argument(
        "assemble: Dirichlet clamp is only meaningful at an artificial "
        "truncation end");
  const std::size_t n = grid.n_cells();
  NeumannOperator op;
  op.dirichlet_right_ = right == RightEnd::dirichlet;
  const std::size_t active = op.dirichlet_right_ ? n : n + 1;

  op.c_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    op.c_[i] = 1.0 / (grid.s[i + 1] - grid.s[i]);
  op.w_.assign(grid.w.begin(), grid.w.begin() + active);

  op.ldiag_.resize(active);
  for (std::size_t i = 0; i < active; ++i) {
    double d = 0.0;
    if (i > 0) d += op.c_[i - 1];
    if (i < n) d += op.c_[i];  // for the clamped row this is the edge to 0
    op.ldiag_[i] = d;
  }
  return op;
}

NeumannOperator NeumannOperator::assemble(const Grid2D& grid) {
  NeumannOperator op;
  op.m_ = grid.n_theta;
  op.w_ = grid.wfull;
  op.wrow_ = grid.w;
  op.cr_ = grid.cr;
  op.ct_ = grid.ct;
  return op;
}

void NeumannOperator::apply(std::span<const double> in,
                            std::span<double> out) const {
  if (in.size() != size() || out.size() != size())
    throw std::invalid_argument("apply: size mismatch");
  if (is_2d())
    kernels::apply_cylinder(cr_, ct_, wrow_, m_, in, out);
  else
    kernels::apply_flux1d(c_, w_, dirichlet_right_, in, out);
}

void NeumannOperator::apply_serial(std::span<const double> in,
                                   std::span<double> out) const {
  if (is_2d())
    kernels::apply_cylinder_serial(cr_, ct_, wrow_, m_, in, out);
  else
    kernels::apply_flux1d_serial(c_, w_, dirichlet_right_, in, out);
}

std::vector<double> NeumannOperator::apply(const std::vector<double>& in) const {
  std::vector<double> out(in.size());
  apply(std::span<const double>(in), std::span<double>(out));
  return out;
}

double NeumannOperator::inner(std::span<const double> f,
                              std::span<const double> g) const {
  return kernels::dot3(w_, f, g);
}

double NeumannOperator::dirichlet_form(std::span<const double> f,
                                       std::span<const double> g) const {
  double acc = 0.0;
  if (is_2d()) {
    const std::size_t nr = wrow_.size() - 1;
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        const std::size_t a = i * m_ + j, b = (i + 1) * m_ + j;
        acc += cr_[i] * (f[b] - f[a]) * (g[b] - g[a]);
      }
    for (std::size_t i = 0; i <= nr; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        const std::size_t a = i * m_ + j;
        const std::size_t b = i * m_ + (j + 1 == m_ ? 0 : j + 1);
        acc += ct_[i] * (f[b] - f[a]) * (g[b] - g[a]);
      }
    return acc;
  }
  const std::size_t active = size();
  for (std::size_t i = 0; i + 1 < active; ++i)
    acc += c_[i] * (f[i + 1] - f[i]) * (g[i + 1] - g[i]);
  if (dirichlet_right_)  // edge to the clamped zero node
    acc += c_.back() * f[active - 1] * g[active - 1];
  return acc;
}

double NeumannOperator::spectral_bound() const {
  double bound = 0.0;
  if (is_2d()) {
    const std::size_t nr = wrow_.size() - 1;
    for (std::size_t i = 0; i <= nr; ++i) {
      const double cin = i > 0 ? cr_[i - 1] : 0.0;
      const double cout = i < nr ? cr_[i] : 0.0;
      double row = (cin + cout + 2.0 * ct_[i]) / wrow_[i] +
                   2.0 * ct_[i] / wrow_[i];
      if (i > 0) row += cin / std::sqrt(wrow_[i] * wrow_[i - 1]);
      if (i < nr) row += cout / std::sqrt(wrow_[i] * wrow_[i + 1]);
      bound = std::max(bound, row);
    }
    return bound;
  }
  const std::size_t active = size();
  for (std::size_t i = 0; i < active; ++i) {
    double row = ldiag_[i] / w_[i];
    if (i > 0) row += c_[i - 1] / std::sqrt(w_[i] * w_[i - 1]);
    if (i + 1 < active) row += c_[i] / std::sqrt(w_[i] * w_[i + 1]);
    bound = std::max(bound, row);
  }
  return bound;
}

void NeumannOperator::symmetric_tridiagonal(std::vector<double>& diag,
                                            std::vector<double>& offdiag) const {
  if (is_2d())
    throw std::logic_error("symmetric_tridiagonal: 1D operators only");
  const std::size_t active = size();
  diag.resize(active);
  for (std::size_t i = 0; i < active; ++i) diag[i] = ldiag_[i] / w_[i];
  offdiag.resize(active - 1);
  for (std::size_t i = 0; i + 1 < active; ++i)
    offdiag[i] = -c_[i] / std::sqrt(w_[i] * w_[i + 1]);
}

namespace {

// signed df/ds, centered inside, one-sided at the ends
std::vector<double> arc_derivative(const Grid1D& grid,
                                   std::span<const double> f) {
  const std::size_t n = grid.n_nodes();
  const auto& s = grid.s;
  std::vector<double> d(n);
  d[0] = (f[1] - f[0]) / (s[1] - s[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (f[i + 1] - f[i - 1]) / (s[i + 1] - s[i - 1]);
  d[n - 1] = (f[n - 1] - f[n - 2]) / (s[n - 1] - s[n - 2]);
  return d;
}

}  // namespace

std::vector<double> leibniz_residual_field(const Grid1D& grid,
                                           const NeumannOperator& op,
                                           std::span<const double> f,
                                           std::span<const double> chi) {
  if (op.is_2d() || op.size() != grid.n_nodes())
    throw std::invalid_argument("leibniz_residual: operator/grid mismatch");
  const std::size_t n = grid.n_nodes();
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = f[i] * chi[i];
  const std::vector<double> h_prod = op.apply(prod);
  const std::vector<double> hf = op.apply(std::vector<double>(f.begin(), f.end()));
  const std::vector<double> hchi =
      op.apply(std::vector<double>(chi.begin(), chi.end()));
  const std::vector<double> df = arc_derivative(grid, f);
  const std::vector<double> dchi = arc_derivative(grid, chi);
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i)
    res[i] = h_prod[i] - chi[i] * hf[i] - f[i] * hchi[i] + 2.0 * df[i] * dchi[i];
  return res;
}

double leibniz_residual(const Grid1D& grid, const NeumannOperator& op,
                        std::span<const double> f,
                        std::span<const double> chi) {
  const auto res = leibniz_residual_field(grid, op, f, chi);
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < res.size(); ++i)
    acc += grid.w[i] * res[i] * res[i];
  return std::sqrt(acc);
}

double green_identity_defect(const Grid1D& grid, const NeumannOperator& op,
                             std::span<const double> f,
                             std::span<const double> g) {
  if (op.is_2d() || op.size() != grid.n_nodes())
    throw std::invalid_argument("green_identity_defect: operator/grid mismatch");
  const std::size_t n = grid.n_nodes();
  const std::vector<double> hf = op.apply(std::vector<double>(f.begin(), f.end()));
  double lhs = 0.0;  // <-Hf, g>_w over rows away from the ends
  for (std::size_t i = 1; i + 1 < n; ++i) lhs += grid.w[i] * -hf[i] * g[i];
  const std::vector<double> df = arc_derivative(grid, f);
  const std::vector<double> dg = arc_derivative(grid, g);
  const double grad_quad = kernels::dot3(grid.w, df, dg);
  const auto& s = grid.s;
  // gridded-region ends, outward normals; sigma = 1 for a point boundary
  const double left = -lagrange_deriv(s[0], s[1], s[2], f[0], f[1], f[2]);
  const double right = lagrange_deriv(s[n - 1], s[n - 2], s[n - 3], f[n - 1],
                                      f[n - 2], f[n - 3]);
  const double boundary = left * g[0] + right * g[n - 1];
  return std::abs(lhs + grad_quad - boundary);
}

}  // namespace nlb
