#pragma once

#include <functional>
#include <vector>

namespace nlb {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-2;
  double max_step = 1.0;
  std::size_t max_steps = 2'000'000;
};

struct OdeResult {
  std::vector<double> y;
  double s_reached = 0.0;
  std::size_t steps = 0;
  bool completed = false;
};

using OdeRhs =
    std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

// Integrates y' = rhs(s, y) from s0 to s1 (s1 > s0) with the Dormand-Prince
// 5(4) embedded pair and standard PI-free step control. The optional monitor
// is called after each accepted step; returning false stops integration
// early (result.completed stays false, y/s_reached hold the stop state).
OdeResult ode_integrate(
    const OdeRhs& rhs, double s0, double s1, std::vector<double> y0,
    const OdeOptions& opts = {},
    const std::function<bool(double, const std::vector<double>&)>& monitor = {});

}  // namespace nlb
