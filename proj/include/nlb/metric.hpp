#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace nlb {

/// One-dimensional Riemannian interval: metric g(x) dx^2 on [x_min, x_max),
/// with x_max = +inf for a half-line. g must be positive and C^1 on the
/// open interior; g_prime is used by the operator assembly and the Weyl
/// classifier.
struct Metric1D {
  std::string label;
  double x_min = 0.0;
  double x_max = std::numeric_limits<double>::infinity();
  std::function<double(double)> g;
  std::function<double(double)> g_prime;

  bool has_open_end() const { return !std::isfinite(x_max); }
  double sqrt_g(double x) const { return std::sqrt(g(x)); }
};

/// Riemannian distance between coordinates p and q: |integral of sqrt(g)|.
/// Uses a log-x substitution internally when q/p spans many decades.
double geodesic_distance(const Metric1D& m, double p, double q);

/// Arclength from x_min to x (same integral, anchored at the boundary end).
double arclength_from_boundary(const Metric1D& m, double x);

struct CompletenessFit {
  std::string model;   // "log", "power", "bounded"
  double c = 0.0;      // scale
  double d = 0.0;      // bounded-model offset coefficient
  double alpha = 0.0;  // power-model exponent
  double residual = 0.0;  // RMS of per-point relative misfit
};

struct CompletenessReport {
  std::string verdict;  // "complete", "incomplete", "indeterminate"
  bool decided = false;
  bool complete = false;
  std::string evidence;             // one-line human summary
  std::vector<double> cutoffs;      // L values probed
  std::vector<double> partials;     // arclength(x_min -> L)
  std::vector<CompletenessFit> fits;
  std::string best_model;
};

/// Completeness of the metric at its open end, decided by fitting the
/// growth of partial arclength integrals against three envelope models
/// (logarithmic, power-law, bounded). Compact intervals are complete
/// outright. A best fit with relative residual above 0.1 yields
/// "indeterminate" rather than a guess.
CompletenessReport is_complete(const Metric1D& m);

}  // namespace nlb
