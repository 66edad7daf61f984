// Timings for the hot kernels, serial reference vs the OpenMP dispatch
// path, plus one end-to-end propagator comparison. The parallel reductions
// are blocked so results are bitwise equal to serial; this target is where
// that trade is priced.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlb/grid.hpp"
#include "nlb/kernels.hpp"
#include "nlb/neumann_operator.hpp"
#include "nlb/propagators.hpp"
#include "nlb/registry.hpp"
#include "nlb/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_of(int reps, const std::function<void()>& fn) {
  // one warmup, then best-of-3 medians over `reps` inner iterations
  fn();
  double best = 1e300;
  for (int outer = 0; outer < 3; ++outer) {
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = clock_type::now();
    best = std::min(
        best, std::chrono::duration<double>(t1 - t0).count() / reps);
  }
  return best;
}

void report(const std::string& name, std::size_t n, double serial,
            double parallel) {
  std::printf("%-22s n=%-9zu serial %10.3f us   parallel %10.3f us   x%.2f\n",
              name.c_str(), n, serial * 1e6, parallel * 1e6,
              serial / parallel);
}

}  // namespace

int main() {
  using namespace nlb;
  std::printf("openmp: %s, max threads %d\n",
              kernels::openmp_enabled() ? "on" : "off",
              kernels::max_threads());

  Rng rng(12345);
  for (std::size_t n : {std::size_t{1} << 16, std::size_t{1} << 20}) {
    std::vector<double> w(n), a(n), b(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 + rng.uniform();
      a[i] = rng.uniform(-1.0, 1.0);
      b[i] = rng.uniform(-1.0, 1.0);
    }
    const int reps = n > (std::size_t{1} << 18) ? 50 : 400;
    report("dot3", n,
           time_of(reps, [&] { kernels::dot3_serial(w, a, b); }),
           time_of(reps, [&] { kernels::dot3(w, a, b); }));
    report("sum_pow p=1.5", n,
           time_of(reps / 5 + 1,
                   [&] { kernels::sum_pow_serial(w, a, 1.5); }),
           time_of(reps / 5 + 1, [&] { kernels::sum_pow(w, a, 1.5); }));
    report("flux1d", n,
           time_of(reps, [&] {
             kernels::apply_flux1d_serial(b, w, false, a, out);
           }),
           time_of(reps, [&] { kernels::apply_flux1d(b, w, false, a, out); }));
  }

  {
    const SurfaceEntry& e = find_surface("cosh_cylinder");
    const Grid2D g = build_grid(e.surface, 512, 256);
    const NeumannOperator op = NeumannOperator::assemble(g);
    std::vector<double> f(g.n_nodes()), out(g.n_nodes());
    for (auto& v : f) v = rng.uniform(-1.0, 1.0);
    report("cylinder apply", g.n_nodes(),
           time_of(100, [&] { op.apply_serial(f, out); }),
           time_of(100, [&] { op.apply(f, out); }));

    const auto t0 = clock_type::now();
    std::vector<double> u = heat_apply(op, 1e-3, f);
    const auto t1 = clock_type::now();
    std::printf("heat_apply t=1e-3 on 512x256: %.3f s (CN + weighted CG)\n",
                std::chrono::duration<double>(t1 - t0).count());
    // keep the result alive so the whole solve cannot be elided
    std::printf("  checksum %.12g\n", weighted_inner(g, u, f));
  }
  return 0;
}
