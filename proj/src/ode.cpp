#include "nlb/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlb {

namespace {

// Dormand-Prince 5(4) tableau. b5 equals the last stage row (FSAL), so k7 of
// an accepted step is k1 of the next.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = kB1 - 5179.0 / 57600.0, kE3 = kB3 - 7571.0 / 16695.0,
                 kE4 = kB4 - 393.0 / 640.0, kE5 = kB5 + 92097.0 / 339200.0,
                 kE6 = kB6 - 187.0 / 2100.0, kE7 = -1.0 / 40.0;

}  // namespace

OdeResult ode_integrate(
    const OdeRhs& rhs, double s0, double s1, std::vector<double> y0,
    const OdeOptions& opts,
    const std::function<bool(double, const std::vector<double>&)>& monitor) {
  if (!(s1 > s0)) throw std::invalid_argument("ode_integrate: need s1 > s0");
  const std::size_t n = y0.size();
  OdeResult res;
  res.y = std::move(y0);
  res.s_reached = s0;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> tmp(n), y5(n);
  rhs(s0, res.y, k1);

  double s = s0;
  double h = std::min({opts.initial_step, opts.max_step, s1 - s0});
  while (res.steps < opts.max_steps) {
    if (s + h > s1) h = s1 - s;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = res.y[i] + h * kA21 * k1[i];
    rhs(s + h / 5.0, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = res.y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(s + 3.0 * h / 10.0, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = res.y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(s + 4.0 * h / 5.0, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = res.y[i] +
               h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    rhs(s + 8.0 * h / 9.0, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = res.y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                               kA64 * k4[i] + kA65 * k5[i]);
    rhs(s + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y5[i] = res.y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                              kB5 * k5[i] + kB6 * k6[i]);
    rhs(s + h, y5, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                            kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(res.y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    ++res.steps;

    if (err <= 1.0) {
      s += h;
      res.y = y5;
      res.s_reached = s;
      std::swap(k1, k7);
      if (monitor && !monitor(s, res.y)) return res;
      if (s >= s1) {
        res.completed = true;
        return res;
      }
    }
    const double factor =
        (err > 0.0) ? 0.9 * std::pow(err, -0.2)
                    : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    h = std::min(h, opts.max_step);
    if (!(h > 0.0) || s + h == s) break;
  }
  return res;
}

}  // namespace nlb
