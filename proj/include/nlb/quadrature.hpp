#pragma once

#include <functional>

namespace nlb {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // sum of per-panel |K15 - G7|
  int depth_used = 0;
  bool converged = true;  // false if some panel hit max depth above tolerance
};

/// Adaptive Gauss-Kronrod 7/15 with interval bisection.
///
/// Splits until each panel's |K15 - G7| is below its share of `abs_tol`
/// or below the machine floor 50*eps*|K15 of |f||, whichever is larger.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, int max_depth = 60);

/// Same integral computed in u = log x; requires 0 < a <= b.
///
/// Needed when b/a spans many decades (bisection in x cannot resolve a
/// feature near `a` when b/a ~ e^200; in u the span is just ~200 wide).
QuadResult integrate_log(const std::function<double(double)>& f, double a,
                         double b, double abs_tol = 1e-10, int max_depth = 60);

/// Dispatcher: uses the log substitution when a > 0 and b/a > 1e4.
QuadResult integrate_auto(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10);

}  // namespace nlb
