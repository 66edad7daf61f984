#include "nlb/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nlb/kernels.hpp"
#include "nlb/tridiag_eig.hpp"

namespace nlb {

namespace {

constexpr double kDgSlack = 1.05;
constexpr double kDgFloor = 1e-13;   // CN roundoff floor on the inner product
constexpr double kTail = 1e-6;       // finite-speed leakage threshold
constexpr double kEnergyQuantile = 1e-8;

// One Crank-Nicolson substep for a 1D operator: Thomas solve of
// (I + a H) u_next = (I - a H) u_cur with a = dt/2.
class CnTridiagSolver {
 public:
  CnTridiagSolver(const NeumannOperator& op, double a) : a_(a), op_(&op) {
    const std::size_t n = op.size();
    const auto& w = op.weights();
    const auto& c = op.edge_coupling();
    const auto& ld = op.laplacian_diag();
    diag_.resize(n);
    lower_.resize(n);
    upper_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      diag_[i] = 1.0 + a * ld[i] / w[i];
      lower_[i] = i > 0 ? -a * c[i - 1] / w[i] : 0.0;
      upper_[i] = i + 1 < n ? -a * c[i] / w[i] : 0.0;
    }
    scratch_.resize(n);
  }

  void step(std::vector<double>& u) {
    const std::size_t n = u.size();
    // rhs = (I - a H) u, via the flux-form apply for exact constants.
    op_->apply(u, scratch_);
    for (std::size_t i = 0; i < n; ++i)
      scratch_[i] = u[i] - a_ * scratch_[i];
    // Thomas elimination (the system is strictly diagonally dominant).
    cp_.assign(n, 0.0);
    cp_[0] = upper_[0] / diag_[0];
    u[0] = scratch_[0] / diag_[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = diag_[i] - lower_[i] * cp_[i - 1];
      cp_[i] = upper_[i] / m;
      u[i] = (scratch_[i] - lower_[i] * u[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) u[i] -= cp_[i] * u[i + 1];
  }

 private:
  double a_;
  const NeumannOperator* op_;
  std::vector<double> diag_, lower_, upper_, cp_, scratch_;
};

// CG in the weighted inner product for (I + a H) x = b; the operator is
// self-adjoint and >= I there, so plain CG converges fast.
void cn_solve_cg(const NeumannOperator& op, double a,
                 const std::vector<double>& b, std::vector<double>& x) {
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), ap(n), hx(n);
  op.apply(x, hx);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - (x[i] + a * hx[i]);
  p = r;
  const auto& w = op.weights();
  double rz = kernels::dot3(w, r, r);
  const double b_norm = std::sqrt(kernels::dot3(w, b, b));
  const double tol = 1e-14 * std::max(b_norm, 1e-300);
  for (int it = 0; it < 500 && std::sqrt(rz) > tol; ++it) {
    op.apply(p, ap);
    for (std::size_t i = 0; i < n; ++i) ap[i] = p[i] + a * ap[i];
    const double alpha = rz / kernels::dot3(w, p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rz_new = kernels::dot3(w, r, r);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void hull_arclength(const Grid1D& grid, const std::vector<std::size_t>& u,
                    double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (std::size_t i : u) {
    lo = std::min(lo, grid.s[i]);
    hi = std::max(hi, grid.s[i]);
  }
}

void validate_pair(const NeumannOperator& op,
                   const std::vector<std::size_t>& u1,
                   const std::vector<std::size_t>& u2) {
  if (u1.empty() || u2.empty())
    throw std::invalid_argument("propagation check: empty node set");
  std::vector<char> mask(op.size(), 0);
  for (std::size_t i : u1) {
    if (i >= op.size())
      throw std::invalid_argument("propagation check: node out of range");
    mask[i] = 1;
  }
  for (std::size_t i : u2) {
    if (i >= op.size())
      throw std::invalid_argument("propagation check: node out of range");
    if (mask[i])
      throw std::invalid_argument("propagation check: node sets overlap");
  }
}

}  // namespace

std::vector<double> heat_apply(const NeumannOperator& op, double t,
                               std::span<const double> f) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_apply: need t > 0");
  if (f.size() != op.size())
    throw std::invalid_argument("heat_apply: size mismatch");
  const double bound = op.spectral_bound();
  const std::size_t m = static_cast<std::size_t>(
      std::max(1.0, std::ceil(t * bound / 0.5)));
  const double a = t / static_cast<double>(m) / 2.0;

  std::vector<double> u(f.begin(), f.end());
  if (op.is_2d()) {
    std::vector<double> rhs(u.size()), hu(u.size());
    for (std::size_t k = 0; k < m; ++k) {
      op.apply(u, hu);
      for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] - a * hu[i];
      cn_solve_cg(op, a, rhs, u);
    }
  } else {
    CnTridiagSolver solver(op, a);
    for (std::size_t k = 0; k < m; ++k) solver.step(u);
  }
  return u;
}

std::vector<double> wave_cos_apply(const NeumannOperator& op, double s,
                                   std::span<const double> f,
                                   double* energy_drift) {
  if (s < 0.0) throw std::invalid_argument("wave_cos_apply: need s >= 0");
  if (f.size() != op.size())
    throw std::invalid_argument("wave_cos_apply: size mismatch");
  std::vector<double> cur(f.begin(), f.end());
  if (energy_drift) *energy_drift = 0.0;
  if (s == 0.0) return cur;

  const double dt_max = 0.9 * 2.0 / std::sqrt(op.spectral_bound());
  const std::size_t m =
      static_cast<std::size_t>(std::max(1.0, std::ceil(s / dt_max)));
  const double dt = s / static_cast<double>(m);
  const std::size_t n = cur.size();
  const auto& w = op.weights();

  std::vector<double> h(n), next(n), prev(n), diff(n);
  op.apply(cur, h);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = cur[i] - 0.5 * dt * dt * h[i];

  double e0 = 0.0;
  bool have_e0 = false;
  auto record_energy = [&](const std::vector<double>& uk,
                           const std::vector<double>& ukp,
                           const std::vector<double>& huk) {
    if (!energy_drift) return;
    for (std::size_t i = 0; i < n; ++i) diff[i] = (ukp[i] - uk[i]) / dt;
    const double e =
        kernels::dot3(w, diff, diff) + kernels::dot3(w, huk, ukp);
    if (!have_e0) {
      e0 = e;
      have_e0 = true;
    } else {
      const double drift = std::abs(e - e0) / std::max(std::abs(e0), 1e-300);
      *energy_drift = std::max(*energy_drift, drift);
    }
  };
  record_energy(cur, next, h);

  for (std::size_t k = 1; k < m; ++k) {
    prev.swap(cur);
    cur.swap(next);
    op.apply(cur, h);
    for (std::size_t i = 0; i < n; ++i)
      next[i] = 2.0 * cur[i] - prev[i] - dt * dt * h[i];
    record_energy(cur, next, h);
  }
  return next;
}

DenseSpectral DenseSpectral::build(const NeumannOperator& op) {
  if (op.is_2d())
    throw std::invalid_argument("DenseSpectral: 1D operators only");
  if (op.size() > 1300)
    throw std::invalid_argument("DenseSpectral: operator too large");
  DenseSpectral d;
  d.n_ = op.size();
  std::vector<double> diag, off;
  op.symmetric_tridiagonal(diag, off);
  TridiagEigen sys = tridiag_eigensystem(diag, off);
  d.values_ = std::move(sys.values);
  d.vectors_ = std::move(sys.vectors);
  d.sqrt_w_.resize(d.n_);
  d.inv_sqrt_w_.resize(d.n_);
  for (std::size_t i = 0; i < d.n_; ++i) {
    d.sqrt_w_[i] = std::sqrt(op.weights()[i]);
    d.inv_sqrt_w_[i] = 1.0 / d.sqrt_w_[i];
  }
  return d;
}

std::vector<double> DenseSpectral::apply_filtered(
    std::span<const double> f, std::span<const double> filter) const {
  if (f.size() != n_) throw std::invalid_argument("DenseSpectral: size");
  std::vector<double> y(n_), out(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    const double* q = vectors_.data() + k * n_;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += q[i] * sqrt_w_[i] * f[i];
    y[k] = filter[k] * acc;
  }
  for (std::size_t k = 0; k < n_; ++k) {
    const double* q = vectors_.data() + k * n_;
    for (std::size_t i = 0; i < n_; ++i) out[i] += q[i] * y[k];
  }
  for (std::size_t i = 0; i < n_; ++i) out[i] *= inv_sqrt_w_[i];
  return out;
}

std::vector<double> DenseSpectral::heat(double t,
                                        std::span<const double> f) const {
  if (t < 0.0) throw std::invalid_argument("DenseSpectral::heat: t < 0");
  std::vector<double> filter(n_);
  for (std::size_t k = 0; k < n_; ++k)
    filter[k] = std::exp(-t * std::max(values_[k], 0.0));
  return apply_filtered(f, filter);
}

std::vector<double> DenseSpectral::wave_cos(double s,
                                            std::span<const double> f) const {
  std::vector<double> filter(n_);
  for (std::size_t k = 0; k < n_; ++k)
    filter[k] = std::cos(s * std::sqrt(std::max(values_[k], 0.0)));
  return apply_filtered(f, filter);
}

std::vector<double> DenseSpectral::eigenvector(std::size_t k) const {
  std::vector<double> v(n_);
  for (std::size_t i = 0; i < n_; ++i)
    v[i] = vectors_[k * n_ + i] * inv_sqrt_w_[i];
  return v;
}

void PropagationReport::absorb(const PropagationReport& other) {
  pairs.insert(pairs.end(), other.pairs.begin(), other.pairs.end());
  slack = other.slack;
  floor = other.floor;
  max_ratio = std::max(max_ratio, other.max_ratio);
  all_pass = all_pass && other.all_pass;
}

std::vector<double> tapered_indicator(const NeumannOperator& op,
                                      const std::vector<std::size_t>& nodes) {
  if (nodes.empty())
    throw std::invalid_argument("tapered_indicator: empty set");
  std::vector<char> mask(op.size(), 0);
  for (std::size_t i : nodes) {
    if (i >= op.size())
      throw std::invalid_argument("tapered_indicator: node out of range");
    mask[i] = 1;
  }
  auto inside = [&](std::size_t i) { return mask[i] != 0; };

  std::vector<double> f(op.size(), 0.0);
  const std::size_t n = op.size();
  for (std::size_t i : nodes) {
    bool edge = false;
    if (op.is_2d()) {
      const std::size_t m = op.theta_count();
      const std::size_t row = i / m, col = i % m;
      const std::size_t rows = n / m;
      if (row > 0 && !inside(i - m)) edge = true;
      if (row + 1 < rows && !inside(i + m)) edge = true;
      if (!inside(row * m + (col + 1) % m)) edge = true;
      if (!inside(row * m + (col + m - 1) % m)) edge = true;
    } else {
      if (i > 0 && !inside(i - 1)) edge = true;
      if (i + 1 < n && !inside(i + 1)) edge = true;
    }
    f[i] = edge ? 0.5 : 1.0;
  }
  const double norm = std::sqrt(kernels::dot3(op.weights(), f, f));
  for (double& v : f) v /= norm;
  return f;
}

double set_distance(const Grid1D& grid, const std::vector<std::size_t>& u1,
                    const std::vector<std::size_t>& u2) {
  double lo1, hi1, lo2, hi2;
  hull_arclength(grid, u1, lo1, hi1);
  hull_arclength(grid, u2, lo2, hi2);
  return std::max({0.0, lo2 - hi1, lo1 - hi2});
}

PropagationReport davies_gaffney_check(const NeumannOperator& op,
                                       const Grid1D& grid,
                                       const std::vector<std::size_t>& u1,
                                       const std::vector<std::size_t>& u2,
                                       const std::vector<double>& t_list) {
  validate_pair(op, u1, u2);
  if (t_list.empty())
    throw std::invalid_argument("davies_gaffney_check: empty t_list");
  const double t_min =
      std::pow(2.0 * grid.max_cell_arclength, 2);
  for (double t : t_list)
    if (t < t_min)
      throw std::invalid_argument(
          "davies_gaffney_check: t below the grid-scale cutoff (2 h_arc)^2");

  PropagationReport report;
  report.slack = kDgSlack;
  report.floor = kDgFloor;

  PropagationPair pair;
  pair.u1 = sorted_unique(u1);
  pair.u2 = sorted_unique(u2);
  pair.rho = set_distance(grid, u1, u2);

  const std::vector<double> f1 = tapered_indicator(op, pair.u1);
  const std::vector<double> f2 = tapered_indicator(op, pair.u2);
  pair.norm1 = std::sqrt(kernels::dot3(op.weights(), f1, f1));
  pair.norm2 = std::sqrt(kernels::dot3(op.weights(), f2, f2));
  const double norms = pair.norm1 * pair.norm2;

  for (double t : t_list) {
    const std::vector<double> u = heat_apply(op, t, f1);
    PropagationSample s;
    s.t_or_s = t;
    s.observed = std::abs(op.inner(u, f2));
    s.bound = std::exp(-pair.rho * pair.rho / (4.0 * t)) * norms;
    s.threshold = std::max(kDgSlack * s.bound, kDgFloor * norms);
    s.ratio = s.observed / s.threshold;
    s.pass = s.observed <= s.threshold;
    report.max_ratio = std::max(report.max_ratio, s.ratio);
    report.all_pass = report.all_pass && s.pass;
    pair.samples.push_back(s);
  }
  report.pairs.push_back(std::move(pair));
  return report;
}

PropagationReport finite_speed_check(const NeumannOperator& op,
                                     const Grid1D& grid,
                                     const std::vector<std::size_t>& u1,
                                     const std::vector<std::size_t>& u2,
                                     const std::vector<double>& s_list) {
  validate_pair(op, u1, u2);
  const double margin = 3.0 * grid.max_cell_arclength;

  PropagationReport report;
  report.slack = kTail;
  report.floor = 0.0;

  PropagationPair pair;
  pair.u1 = sorted_unique(u1);
  pair.u2 = sorted_unique(u2);
  pair.rho = set_distance(grid, u1, u2);
  for (double s : s_list)
    if (s < 0.0 || s > pair.rho - margin)
      throw std::invalid_argument(
          "finite_speed_check: s outside [0, rho - 3 h_arc]");

  const std::vector<double> f1 = tapered_indicator(op, pair.u1);
  const std::vector<double> f2 = tapered_indicator(op, pair.u2);
  pair.norm1 = std::sqrt(kernels::dot3(op.weights(), f1, f1));
  pair.norm2 = std::sqrt(kernels::dot3(op.weights(), f2, f2));
  const double norms = pair.norm1 * pair.norm2;

  double lo1, hi1;
  hull_arclength(grid, pair.u1, lo1, hi1);

  const std::size_t n = op.size();
  std::vector<std::size_t> order(n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i)
    dist[i] = std::max({0.0, lo1 - grid.s[i], grid.s[i] - hi1});

  for (double s : s_list) {
    const std::vector<double> u = wave_cos_apply(op, s, f1);
    PropagationSample sample;
    sample.t_or_s = s;
    sample.observed = std::abs(op.inner(u, f2));
    sample.bound = kTail * norms;
    sample.threshold = sample.bound;
    sample.ratio = sample.observed / sample.threshold;

    // Empirical support front: smallest hull distance containing all but
    // a 1e-8 sliver of the wave energy.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dist[a] < dist[b];
    });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += op.weights()[i] * u[i] * u[i];
    double acc = 0.0, radius = 0.0;
    for (std::size_t idx : order) {
      acc += op.weights()[idx] * u[idx] * u[idx];
      radius = dist[idx];
      if (acc >= (1.0 - kEnergyQuantile) * total) break;
    }
    const double r_bound = s + margin;
    pair.support_radius.push_back(radius);
    pair.support_bound.push_back(r_bound);

    sample.pass = sample.observed <= sample.threshold && radius <= r_bound;
    report.max_ratio = std::max(report.max_ratio, sample.ratio);
    report.all_pass = report.all_pass && sample.pass;
    pair.samples.push_back(sample);
  }
  report.pairs.push_back(std::move(pair));
  return report;
}

double front_arrival_time(const NeumannOperator& op, const Grid1D& grid,
                          const std::vector<std::size_t>& u1,
                          const std::vector<std::size_t>& u2,
                          double threshold) {
  validate_pair(op, u1, u2);
  const std::vector<double> f1 = tapered_indicator(op, u1);
  const std::vector<double> f2 = tapered_indicator(op, u2);
  const double rho = set_distance(grid, u1, u2);
  const double h = grid.max_cell_arclength;

  auto overlap = [&](double s) {
    const std::vector<double> u = wave_cos_apply(op, s, f1);
    return std::abs(op.inner(u, f2));
  };

  double lo = 0.0;
  double hi = rho;
  const double limit = 2.0 * rho + 10.0;
  while (overlap(hi) < threshold) {
    lo = hi;
    hi += std::max(3.0 * h, 0.1 * rho);
    if (hi > limit) return hi;  // front never arrived in the window
  }
  while (hi - lo > 0.25 * h) {
    const double mid = 0.5 * (lo + hi);
    (overlap(mid) >= threshold ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> heat_boundary_flux(const NeumannOperator& op,
                                       const Grid1D& grid, double t,
                                       std::span<const double> f) {
  const std::vector<double> u = heat_apply(op, t, f);
  return normal_derivative(grid, u);
}

}  // namespace nlb
