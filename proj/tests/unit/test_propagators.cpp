#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nlb/grid.hpp"
#include "nlb/metric.hpp"
#include "nlb/neumann_operator.hpp"
#include "nlb/propagators.hpp"
#include "nlb/registry.hpp"
#include "nlb/rng.hpp"

using namespace nlb;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::size_t> nodes_in(const Grid1D& grid, double lo, double hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.s.size(); ++i)
    if (grid.s[i] >= lo && grid.s[i] <= hi) out.push_back(i);
  return out;
}

std::vector<double> random_field(std::size_t n, unsigned seed) {
  Rng rng(seed);
  std::vector<double> f(n);
  for (double& v : f) v = rng.uniform(-1.0, 1.0);
  return f;
}
}  // namespace

TEST_CASE("dense spectral path against the lattice eigenpair") {
  const Metric1D& m = find_metric("flat_interval").metric;
  const Grid1D grid = build_grid(m, 256, Grading::coordinate);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const DenseSpectral dense = DenseSpectral::build(op);
  const double h = grid.s[1] - grid.s[0];
  const double lambda1 = 4.0 / (h * h) * std::pow(std::sin(h / 2.0), 2);

  std::vector<double> f(grid.n_nodes());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(grid.s[i]);

  SUBCASE("heat decay of the first cosine mode is exact") {
    const std::vector<double> u = dense.heat(1.0, f);
    const double decay = std::exp(-lambda1);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::abs(u[i] - decay * f[i]));
    // Roundoff scale: eigenvalues carry eps*||H|| ~ 6e-12 absolute error.
    CHECK(worst < 1e-10);
    // Against the continuum e^{-1} cos(x): off only by the O(h^2)
    // eigenvalue defect.
    double vs_cont = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      vs_cont = std::max(vs_cont,
                         std::abs(u[i] - std::exp(-1.0) * std::cos(grid.s[i])));
    CHECK(vs_cont < 1e-5);
    CHECK(vs_cont > 1e-8);  // the defect is real, not hidden
  }
  SUBCASE("wave oscillation of the first cosine mode is exact") {
    const std::vector<double> u = dense.wave_cos(kPi, f);
    const double factor = std::cos(kPi * std::sqrt(lambda1));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::abs(u[i] - factor * f[i]));
    CHECK(worst < 1e-10);
  }
  SUBCASE("semigroup composition is exact on the dense path") {
    const std::vector<double> g = random_field(f.size(), 7);
    const std::vector<double> one = dense.heat(0.7, g);
    const std::vector<double> two = dense.heat(0.3, dense.heat(0.4, g));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, std::abs(one[i] - two[i]));
    CHECK(worst < 1e-12);
  }
  SUBCASE("cosine functional equation on the dense path") {
    const std::vector<double> g = random_field(f.size(), 8);
    const double s1 = 0.9, s2 = 0.4;
    const std::vector<double> lhs1 = dense.wave_cos(s1 + s2, g);
    const std::vector<double> lhs2 = dense.wave_cos(s1 - s2, g);
    const std::vector<double> rhs = dense.wave_cos(s1, dense.wave_cos(s2, g));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst,
                       std::abs(lhs1[i] + lhs2[i] - 2.0 * rhs[i]));
    CHECK(worst < 1e-10);
  }
  SUBCASE("dense path refuses 2D and oversized operators") {
    const SurfaceEntry& surf = find_surface("flat_cylinder");
    const Grid2D g2 = build_grid(surf.surface, 8, 16);
    CHECK_THROWS_AS(DenseSpectral::build(NeumannOperator::assemble(g2)),
                    std::invalid_argument);
  }
}

TEST_CASE("crank-nicolson heat solver") {
  const Metric1D& m = find_metric("flat_interval").metric;
  const Grid1D grid = build_grid(m, 256, Grading::coordinate);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const DenseSpectral dense = DenseSpectral::build(op);
  const std::vector<double> f = random_field(grid.n_nodes(), 11);

  SUBCASE("matches the dense reference") {
    const std::vector<double> a = heat_apply(op, 0.3, f);
    const std::vector<double> b = dense.heat(0.3, f);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-7);
  }
  SUBCASE("constants are fixed points") {
    std::vector<double> one(grid.n_nodes(), 1.0);
    const std::vector<double> u = heat_apply(op, 2.0, one);
    double worst = 0.0;
    for (double v : u) worst = std::max(worst, std::abs(v - 1.0));
    CHECK(worst < 1e-13);
  }
  SUBCASE("contraction and exact mass conservation") {
    for (double t : {0.01, 0.5, 3.0}) {
      const std::vector<double> u = heat_apply(op, t, f);
      CHECK(std::sqrt(op.inner(u, u)) <= std::sqrt(op.inner(f, f)) * (1 + 1e-13));
      std::vector<double> one(f.size(), 1.0);
      const double mass0 = op.inner(f, one);
      const double mass1 = op.inner(u, one);
      // Scale by the L1 mass; the signed mass of a random field nearly
      // cancels and is no yardstick for roundoff.
      std::vector<double> af(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) af[i] = std::abs(f[i]);
      CHECK(std::abs(mass1 - mass0) < 1e-11 * op.inner(af, one));
    }
  }
  SUBCASE("weighted self-adjointness") {
    const std::vector<double> g = random_field(f.size(), 12);
    const std::vector<double> uf = heat_apply(op, 0.2, f);
    const std::vector<double> ug = heat_apply(op, 0.2, g);
    const double a = op.inner(uf, g), b = op.inner(f, ug);
    CHECK(std::abs(a - b) < 1e-11 * std::max(std::abs(a), 1.0));
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(heat_apply(op, 0.0, f), std::invalid_argument);
    CHECK_THROWS_AS(heat_apply(op, -1.0, f), std::invalid_argument);
  }
}

TEST_CASE("crank-nicolson on the 2D cylinder") {
  const SurfaceEntry& surf = find_surface("cosh_cylinder");
  const Grid2D grid = build_grid(surf.surface, 32, 16);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const std::vector<double> f = random_field(op.size(), 21);

  SUBCASE("contraction, mass, self-adjointness") {
    const std::vector<double> u = heat_apply(op, 0.05, f);
    CHECK(std::sqrt(op.inner(u, u)) <= std::sqrt(op.inner(f, f)) * (1 + 1e-12));
    std::vector<double> one(f.size(), 1.0);
    CHECK(std::abs(op.inner(u, one) - op.inner(f, one)) <
          1e-10 * std::abs(op.inner(f, one)) + 1e-12);
    const std::vector<double> g = random_field(op.size(), 22);
    const double a = op.inner(heat_apply(op, 0.05, f), g);
    const double b = op.inner(f, heat_apply(op, 0.05, g));
    CHECK(std::abs(a - b) < 1e-11 * std::max(std::abs(a), 1.0));
  }
  SUBCASE("pure angular mode decays at the lattice rate on the flat cylinder") {
    const Grid2D fg = build_grid(find_surface("flat_cylinder").surface, 16, 32);
    const NeumannOperator fop = NeumannOperator::assemble(fg);
    std::vector<double> mode(fop.size());
    for (std::size_t i = 0; i <= fg.n_r(); ++i)
      for (std::size_t j = 0; j < fg.n_theta; ++j)
        mode[fg.index(i, j)] = std::cos(fg.theta(j));
    const double dth = fg.dtheta;
    const double mu = (2.0 - 2.0 * std::cos(dth)) / (dth * dth);
    const double t = 0.1;
    const std::vector<double> u = heat_apply(fop, t, mode);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      worst = std::max(worst, std::abs(u[i] - std::exp(-mu * t) * mode[i]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("leapfrog wave propagator") {
  const Metric1D& m = find_metric("flat_interval").metric;
  const Grid1D grid = build_grid(m, 256, Grading::coordinate);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const DenseSpectral dense = DenseSpectral::build(op);

  SUBCASE("s = 0 returns the input exactly") {
    const std::vector<double> f = random_field(grid.n_nodes(), 31);
    CHECK(wave_cos_apply(op, 0.0, f) == f);
  }
  SUBCASE("discrete energy is conserved") {
    const std::vector<double> f = random_field(grid.n_nodes(), 32);
    double drift = 1.0;
    wave_cos_apply(op, 5.0, f, &drift);
    CHECK(drift < 1e-10);
  }
  SUBCASE("first cosine mode flips sign at s = pi") {
    std::vector<double> f(grid.n_nodes());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(grid.s[i]);
    const std::vector<double> u = wave_cos_apply(op, kPi, f);
    const std::vector<double> r = dense.wave_cos(kPi, f);
    double vs_dense = 0.0, vs_cont = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      vs_dense = std::max(vs_dense, std::abs(u[i] - r[i]));
      vs_cont = std::max(vs_cont, std::abs(u[i] + std::cos(grid.s[i])));
    }
    CHECK(vs_dense < 1e-3);
    CHECK(vs_cont < 1e-3);
  }
  SUBCASE("negative s rejected") {
    std::vector<double> f(grid.n_nodes(), 0.0);
    CHECK_THROWS_AS(wave_cos_apply(op, -0.1, f), std::invalid_argument);
  }
}

TEST_CASE("davies-gaffney bound on the flat segment") {
  const Metric1D& m = find_metric("flat_halfline").metric;
  const Grid1D grid = build_grid(m, 1024, Grading::coordinate, 40.0);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const double t_min = std::pow(2.0 * grid.max_cell_arclength, 2);
  std::vector<double> t_list;
  for (double factor : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0})
    t_list.push_back(t_min * factor);

  SUBCASE("far pair rides the roundoff floor and passes") {
    PropagationReport rep = davies_gaffney_check(
        op, grid, nodes_in(grid, 0.0, 1.0), nodes_in(grid, 20.0, 21.0), t_list);
    CHECK(rep.all_pass);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].rho > 18.9);
    CHECK(rep.pairs[0].rho < 19.1);
    CHECK(std::abs(rep.pairs[0].norm1 - 1.0) < 1e-12);
    for (const auto& s : rep.pairs[0].samples) CHECK(s.ratio <= 1.0);
  }
  SUBCASE("close pair is a substantive comparison, not a floor ride") {
    PropagationReport rep = davies_gaffney_check(
        op, grid, nodes_in(grid, 0.0, 1.0), nodes_in(grid, 3.0, 4.0), t_list);
    CHECK(rep.all_pass);
    const auto& samples = rep.pairs[0].samples;
    // At the largest time the bound is well above the floor and the
    // observed overlap is genuinely nonzero.
    CHECK(samples.back().bound > rep.floor);
    CHECK(samples.back().observed > 1e-10);
    CHECK(samples.back().observed <= rep.slack * samples.back().bound);
  }
  SUBCASE("zero-distance limit reduces to contractivity") {
    PropagationReport rep = davies_gaffney_check(
        op, grid, nodes_in(grid, 0.0, 1.0), nodes_in(grid, 1.05, 2.0),
        {t_list[3]});
    CHECK(rep.pairs[0].rho < 0.1);
    CHECK(rep.all_pass);
  }
  SUBCASE("preconditions") {
    const auto u1 = nodes_in(grid, 0.0, 1.0);
    const auto u2 = nodes_in(grid, 3.0, 4.0);
    CHECK_THROWS_AS(davies_gaffney_check(op, grid, u1, u1, t_list),
                    std::invalid_argument);
    CHECK_THROWS_AS(davies_gaffney_check(op, grid, u1, u2, {t_min / 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(davies_gaffney_check(op, grid, {}, u2, t_list),
                    std::invalid_argument);
  }
}

TEST_CASE("finite propagation speed on the flat segment") {
  const Metric1D& m = find_metric("flat_halfline").metric;
  const Grid1D grid = build_grid(m, 1024, Grading::coordinate, 40.0);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const auto u1 = nodes_in(grid, 0.0, 1.0);
  const auto u2 = nodes_in(grid, 20.0, 21.0);

  SUBCASE("tail stays quiet well inside the cone") {
    // Scheme dispersion smears the front over ~(s h^2)^{1/3}; staying a
    // unit inside the cone keeps the overlap at the 1e-6 tail threshold.
    PropagationReport rep =
        finite_speed_check(op, grid, u1, u2, {0.0, 5.0, 10.0, 14.0, 17.0});
    for (const PropagationSample& sm : rep.pairs[0].samples)
      CHECK(sm.observed <= sm.threshold);
    // The support front at the 1-1e-8 energy quantile runs ahead of the
    // cone by the dispersive precursor, ~1.2 (s h^2)^{1/3}. That exceeds
    // the three-cell margin folded into each sample's pass flag, so the
    // aggregate verdict is negative even though every tail is quiet.
    CHECK_FALSE(rep.all_pass);
    const double h = grid.max_cell_arclength;
    for (std::size_t k = 0; k < rep.pairs[0].samples.size(); ++k) {
      const double s = rep.pairs[0].samples[k].t_or_s;
      const double allowance = 2.0 * std::cbrt(std::max(s, 1.0) * h * h);
      CHECK(rep.pairs[0].support_radius[k] <=
            rep.pairs[0].support_bound[k] + allowance);
    }
  }
  SUBCASE("s = 0 overlap is exactly zero") {
    PropagationReport rep = finite_speed_check(op, grid, u1, u2, {0.0});
    CHECK(rep.pairs[0].samples[0].observed == 0.0);
  }
  SUBCASE("front arrives near the geodesic distance") {
    const double rho = set_distance(grid, u1, u2);
    const double arrival = front_arrival_time(op, grid, u1, u2);
    CHECK(arrival > rho - 1.2);
    CHECK(arrival < rho + 0.3);
  }
  SUBCASE("s beyond the allowed window is rejected") {
    CHECK_THROWS_AS(finite_speed_check(op, grid, u1, u2, {25.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("metric fronts travel at arclength speed, not coordinate speed") {
  const MetricEntry& entry = find_metric("x4_example");
  const Grid1D grid =
      build_grid(entry.metric, 1000, Grading::arclength, 100.0);
  const NeumannOperator op = NeumannOperator::assemble(grid);
  const auto u1 = nodes_in(grid, 0.0, 0.05);
  const auto u2 = nodes_in(grid, 0.5, 0.55);
  const double rho = set_distance(grid, u1, u2);
  CHECK(std::abs(rho - 0.45) < 0.01);
  const double arrival = front_arrival_time(op, grid, u1, u2);
  // Coordinate gap is huge (x ~ 1.05 to x = 2) but the metric distance is
  // 0.45, and that is what the wave sees.
  CHECK(std::abs(arrival - rho) < 0.08);
}

TEST_CASE("heat evolution regularizes the boundary flux") {
  const Metric1D& m = find_metric("flat_interval").metric;

  SUBCASE("neumann eigenfunction keeps near-zero flux") {
    const Grid1D grid = build_grid(m, 128, Grading::coordinate);
    const NeumannOperator op = NeumannOperator::assemble(grid);
    std::vector<double> f(grid.n_nodes());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(grid.s[i]);
    const std::vector<double> flux = heat_boundary_flux(op, grid, 0.1, f);
    REQUIRE(flux.size() == 2);
    // cos samples have O(h^3) one-sided derivative defect; evolution only
    // shrinks it.
    CHECK(std::abs(flux[0]) < 5e-5);
    CHECK(std::abs(flux[1]) < 5e-5);
  }
  SUBCASE("generic data: flux decays at second order and in time") {
    std::vector<double> flux128, flux256;
    for (std::size_t n : {std::size_t{128}, std::size_t{256}}) {
      const Grid1D grid = build_grid(m, n, Grading::coordinate);
      const NeumannOperator op = NeumannOperator::assemble(grid);
      std::vector<double> f(grid.n_nodes());
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = grid.s[i];
      const std::vector<double> flux = heat_boundary_flux(op, grid, 0.1, f);
      (n == 128 ? flux128 : flux256) = flux;
    }
    CHECK(std::abs(flux128[0]) < 0.02);
    // The heat solution obeys u_s = 0 and u_sss = 0 at the wall (the
    // normal derivative itself solves a Dirichlet heat problem), so the
    // one-sided stencil superconverges: third order, not the generic
    // second.
    const double rate =
        std::log2(std::abs(flux128[0]) / std::abs(flux256[0]));
    CHECK(rate > 1.9);
    CHECK(rate < 3.5);

    const Grid1D grid = build_grid(m, 128, Grading::coordinate);
    const NeumannOperator op = NeumannOperator::assemble(grid);
    std::vector<double> f(grid.n_nodes());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = grid.s[i];
    double prev = 1e9;
    for (double t : {0.01, 0.1, 1.0}) {
      const std::vector<double> flux = heat_boundary_flux(op, grid, t, f);
      const double worst = std::max(std::abs(flux[0]), std::abs(flux[1]));
      CHECK(worst < prev);
      prev = worst;
    }
  }
}
