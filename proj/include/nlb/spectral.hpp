#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nlb/metric.hpp"

namespace nlb {

enum class EndVerdict { limit_point, limit_circle, boundary_end, indeterminate };

const char* to_string(EndVerdict v);

/// Tail data for one shooting solution of Delta f = lambda f.
struct WeylSolutionTrace {
  std::array<double, 2> initial;     // (f, f') at the anchor
  std::vector<double> checkpoint_x;  // coordinate checkpoints reached
  std::vector<double> checkpoint_s;  // their arclengths from the boundary
  std::vector<double> log_norm;      // ln of the cumulative L2 norm squared
  bool diverged = false;             // norm blew past the overflow guard
  bool converged = false;            // Cauchy tail criterion met
  double last_rel_increment = std::numeric_limits<double>::quiet_NaN();
};

/// Weyl limit-point / limit-circle classification of the open end.
struct WeylReport {
  std::complex<double> lambda;
  double anchor_x = 0.0;
  EndVerdict verdict = EndVerdict::indeterminate;
  std::array<WeylSolutionTrace, 2> solutions;
  std::string evidence;
};

/// Classifies the open end of `m` by integrating two independent solutions
/// of Delta f = lambda f from an interior anchor outward, in arclength
/// (where the equation reads f'' = lambda f regardless of the metric).
/// Cumulative L2 norms are sampled at the coordinate decades 10^k,
/// k = 1..12; a solution whose norm stops changing (relative increment
/// below 1e-8 over the final decade) counts as square-integrable. Both
/// square-integrable -> limit-circle; otherwise limit-point. Norms are
/// tracked in log space with periodic renormalization of the state, so
/// exponentially growing solutions never overflow; growth beyond e^300
/// short-circuits the run as divergent.
///
/// Preconditions: m has an open end; lambda is not real and negative.
WeylReport weyl_classify(const Metric1D& m, std::complex<double> lambda,
                         double anchor_x);
WeylReport weyl_classify(const Metric1D& m, std::complex<double> lambda);

/// Deficiency indices of the Neumann restriction, decided by Weyl
/// classification at lambda = +i and -i (with a lambda = 1 consistency
/// run). The true boundary end never contributes; an open limit-circle
/// end contributes one to each index.
struct DeficiencyReport {
  std::string metric;
  std::array<EndVerdict, 2> ends = {EndVerdict::boundary_end,
                                    EndVerdict::boundary_end};
  int n_plus = 0;
  int n_minus = 0;
  bool essentially_selfadjoint = false;
  bool decided = true;               // false if any classification was flagged
  std::vector<WeylReport> runs;      // +i, -i, +1 (empty for compact metrics)
  CompletenessReport completeness;   // cross-check: complete must imply ESA
  std::string rationale;
};

DeficiencyReport deficiency_indices(const Metric1D& m);

/// Lowest eigenvalues of the truncated operator under Neumann vs Dirichlet
/// conditions at the artificial end. Eigenvalues are sorted ascending and
/// paired by rank, the Neumann zero mode included, so gap[0] for a metric
/// with a persistent extension ambiguity is the surviving lowest Dirichlet
/// eigenvalue itself.
struct BcRow {
  double truncation = 0.0;  // coordinate of the artificial end
  double arclength = 0.0;   // total arclength of the truncated grid
  std::size_t n_cells = 0;
  std::vector<double> neumann;
  std::vector<double> dirichlet;
  std::vector<double> gap;
  bool converged = true;    // eigensolver health flag
};

struct BcTable {
  std::string metric;
  std::size_t k_eigs = 0;
  std::vector<BcRow> rows;
  const std::vector<double>& final_gaps() const { return rows.back().gap; }
};

/// Runs the truncation sweep. `n_cells` applies to the first truncation;
/// later rows are scaled to keep the arclength spacing constant (capped at
/// 4000 cells). Grids are arclength-graded for the same reason.
///
/// Preconditions: m has an open end; truncations strictly increasing and
/// inside the domain; k_eigs >= 1.
BcTable bc_sensitivity(const Metric1D& m, const std::vector<double>& truncations,
                       std::size_t n_cells, std::size_t k_eigs);

}  // namespace nlb
