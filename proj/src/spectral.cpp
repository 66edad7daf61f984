#include "nlb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nlb/grid.hpp"
#include "nlb/neumann_operator.hpp"
#include "nlb/ode.hpp"
#include "nlb/tridiag_eig.hpp"

namespace nlb {

namespace {

constexpr double kLogNormExit = 300.0;   // cumulative norm beyond e^300: divergent
constexpr double kRescaleAt = 1e50;      // state magnitude triggering renorm
constexpr double kTailIncrement = 1e-8;  // relative Cauchy threshold
constexpr double kMaxLeg = 16.0;         // arclength between norm harvests

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// State y = (Re f, Im f, Re f', Im f', P) with f'' = lambda f and P' = |f|^2.
OdeRhs make_rhs(std::complex<double> lambda) {
  const double lr = lambda.real(), li = lambda.imag();
  return [lr, li](double, const std::vector<double>& y,
                  std::vector<double>& dy) {
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = lr * y[0] - li * y[1];
    dy[3] = li * y[0] + lr * y[1];
    dy[4] = y[0] * y[0] + y[1] * y[1];
  };
}

// Integrates one solution from the anchor outward, harvesting the running
// L2 norm into log space and renormalizing the state as needed. Checkpoint
// targets are arclengths measured from the anchor, strictly increasing.
void shoot(std::complex<double> lambda, const std::vector<double>& targets,
           WeylSolutionTrace& trace) {
  const OdeRhs rhs = make_rhs(lambda);
  OdeOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-13;
  opts.initial_step = 1e-3;
  opts.max_step = 0.5;

  std::vector<double> y = {trace.initial[0], 0.0, trace.initial[1], 0.0, 0.0};
  double s = 0.0;
  double log_scale = 0.0;  // true f = stored f * exp(log_scale)
  double log_norm = -std::numeric_limits<double>::infinity();

  for (double target : targets) {
    while (s < target) {
      const double stop = std::min(target, s + kMaxLeg);
      y[4] = 0.0;
      OdeResult leg = ode_integrate(rhs, s, stop, y, opts);
      if (!leg.completed) return;  // step-limited: leave trace undecided
      y = leg.y;
      s = stop;
      if (y[4] > 0.0)
        log_norm = logaddexp(log_norm, std::log(y[4]) + 2.0 * log_scale);
      if (log_norm > kLogNormExit) {
        trace.diverged = true;
        return;
      }
      const double mag = std::max({std::abs(y[0]), std::abs(y[1]),
                                   std::abs(y[2]), std::abs(y[3])});
      if (mag > kRescaleAt) {
        const double ls = std::log(mag);
        for (int i = 0; i < 4; ++i) y[i] *= std::exp(-ls);
        log_scale += ls;
      }
    }
    trace.log_norm.push_back(log_norm);
  }
  if (trace.log_norm.size() >= 2) {
    const double last = trace.log_norm[trace.log_norm.size() - 1];
    const double prev = trace.log_norm[trace.log_norm.size() - 2];
    trace.last_rel_increment = -std::expm1(prev - last);
    trace.converged = trace.last_rel_increment < kTailIncrement;
  }
}

}  // namespace

const char* to_string(EndVerdict v) {
  switch (v) {
    case EndVerdict::limit_point: return "limit-point";
    case EndVerdict::limit_circle: return "limit-circle";
    case EndVerdict::boundary_end: return "boundary-end";
    case EndVerdict::indeterminate: return "indeterminate";
  }
  return "?";
}

WeylReport weyl_classify(const Metric1D& m, std::complex<double> lambda,
                         double anchor_x) {
  if (!m.has_open_end())
    throw std::invalid_argument(
        "weyl_classify: metric has no open end to classify");
  if (lambda.imag() == 0.0 && lambda.real() < 0.0)
    throw std::invalid_argument("weyl_classify: lambda must not be real "
                                "negative (spectrum of -Delta)");
  if (!(anchor_x > m.x_min))
    throw std::invalid_argument("weyl_classify: anchor must be interior");

  WeylReport rep;
  rep.lambda = lambda;
  rep.anchor_x = anchor_x;

  const double s_anchor = arclength_from_boundary(m, anchor_x);
  std::vector<double> xs, targets;
  for (int k = 1; k <= 12; ++k) {
    const double x = std::pow(10.0, k);
    if (x <= anchor_x) continue;
    xs.push_back(x);
    targets.push_back(arclength_from_boundary(m, x) - s_anchor);
  }

  rep.solutions[0].initial = {1.0, 0.0};
  rep.solutions[1].initial = {0.0, 1.0};
  for (auto& trace : rep.solutions) {
    shoot(lambda, targets, trace);
    trace.checkpoint_x.assign(xs.begin(), xs.begin() + trace.log_norm.size());
    trace.checkpoint_s.resize(trace.log_norm.size());
    for (std::size_t i = 0; i < trace.checkpoint_s.size(); ++i)
      trace.checkpoint_s[i] = targets[i] + s_anchor;
  }

  // A solution is decided once it either blew up, or reached every
  // checkpoint (the tail test then labels it). A step-limited run that did
  // neither leaves the verdict open.
  const auto& a = rep.solutions[0];
  const auto& b = rep.solutions[1];
  const auto undecided = [&](const WeylSolutionTrace& t) {
    return !t.diverged && t.log_norm.size() < targets.size();
  };
  if (a.diverged || b.diverged)
    rep.verdict = EndVerdict::limit_point;
  else if (undecided(a) || undecided(b))
    rep.verdict = EndVerdict::indeterminate;
  else
    rep.verdict = (a.converged && b.converged) ? EndVerdict::limit_circle
                                               : EndVerdict::limit_point;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "lambda=(%g,%g) anchor=%g: solution(1,0) %s, solution(0,1) %s "
                "-> %s",
                lambda.real(), lambda.imag(), anchor_x,
                a.diverged ? "norm exceeded e^300"
                           : (a.converged ? "norm converged" : "norm kept growing"),
                b.diverged ? "norm exceeded e^300"
                           : (b.converged ? "norm converged" : "norm kept growing"),
                to_string(rep.verdict));
  rep.evidence = buf;
  return rep;
}

WeylReport weyl_classify(const Metric1D& m, std::complex<double> lambda) {
  return weyl_classify(m, lambda, m.x_min + 1.0);
}

DeficiencyReport deficiency_indices(const Metric1D& m) {
  DeficiencyReport rep;
  rep.metric = m.label;
  rep.completeness = is_complete(m);

  if (!m.has_open_end()) {
    rep.ends = {EndVerdict::boundary_end, EndVerdict::boundary_end};
    rep.essentially_selfadjoint = true;
    rep.rationale =
        "compact manifold with boundary: both ends carry the Neumann "
        "condition, deficiency (0,0)";
    return rep;
  }

  const std::complex<double> i(0.0, 1.0);
  rep.runs.push_back(weyl_classify(m, i));
  rep.runs.push_back(weyl_classify(m, -i));
  rep.runs.push_back(weyl_classify(m, 1.0));  // real-lambda consistency run

  const EndVerdict vp = rep.runs[0].verdict;
  const EndVerdict vm = rep.runs[1].verdict;
  const EndVerdict v1 = rep.runs[2].verdict;
  rep.ends = {EndVerdict::boundary_end, vp};
  rep.decided = vp != EndVerdict::indeterminate &&
                vm != EndVerdict::indeterminate;
  rep.n_plus = vp == EndVerdict::limit_circle ? 1 : 0;
  rep.n_minus = vm == EndVerdict::limit_circle ? 1 : 0;
  rep.essentially_selfadjoint = rep.decided && rep.n_plus == 0 && rep.n_minus == 0;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "open end %s at +i, %s at -i (lambda=1 run: %s); deficiency "
                "(%d,%d)%s",
                to_string(vp), to_string(vm), to_string(v1), rep.n_plus,
                rep.n_minus, vp != v1 ? " [warning: lambda=1 disagrees]" : "");
  rep.rationale = buf;
  return rep;
}

BcTable bc_sensitivity(const Metric1D& m, const std::vector<double>& truncations,
                       std::size_t n_cells, std::size_t k_eigs) {
  if (!m.has_open_end())
    throw std::invalid_argument("bc_sensitivity: metric has no artificial end");
  if (truncations.empty() || k_eigs == 0)
    throw std::invalid_argument("bc_sensitivity: empty request");
  for (std::size_t i = 0; i + 1 < truncations.size(); ++i)
    if (!(truncations[i] < truncations[i + 1]))
      throw std::invalid_argument("bc_sensitivity: truncations must increase");
  if (!(truncations.front() > m.x_min))
    throw std::invalid_argument("bc_sensitivity: truncation not interior");

  BcTable table;
  table.metric = m.label;
  table.k_eigs = k_eigs;

  const double s0 = geodesic_distance(m, m.x_min, truncations.front());
  for (double L : truncations) {
    BcRow row;
    row.truncation = L;
    const double sL = geodesic_distance(m, m.x_min, L);
    const double scaled = static_cast<double>(n_cells) * sL / s0;
    row.n_cells = std::min<std::size_t>(
        4000, std::max<std::size_t>(8, static_cast<std::size_t>(
                                           std::llround(scaled))));
    const Grid1D grid = build_grid(m, row.n_cells, Grading::arclength, L);
    row.arclength = grid.s.back();

    try {
      std::vector<double> diag, off;
      NeumannOperator::assemble(grid, NeumannOperator::RightEnd::neumann)
          .symmetric_tridiagonal(diag, off);
      row.neumann = tridiag_eigenvalues(diag, off);
      NeumannOperator::assemble(grid, NeumannOperator::RightEnd::dirichlet)
          .symmetric_tridiagonal(diag, off);
      row.dirichlet = tridiag_eigenvalues(diag, off);
    } catch (const std::runtime_error&) {
      row.converged = false;
    }
    if (row.converged) {
      row.neumann.resize(std::min(row.neumann.size(), k_eigs));
      row.dirichlet.resize(std::min(row.dirichlet.size(), k_eigs));
      for (std::size_t k = 0; k < std::min(row.neumann.size(),
                                           row.dirichlet.size()); ++k)
        row.gap.push_back(std::abs(row.neumann[k] - row.dirichlet[k]));
    } else {
      row.neumann.assign(k_eigs, std::numeric_limits<double>::quiet_NaN());
      row.dirichlet = row.neumann;
      row.gap = row.neumann;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace nlb
