#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nlb/grid.hpp"
#include "nlb/metric.hpp"
#include "nlb/neumann_operator.hpp"
#include "nlb/ode.hpp"
#include "nlb/registry.hpp"
#include "nlb/rng.hpp"
#include "nlb/spectral.hpp"
#include "nlb/tridiag_eig.hpp"

using namespace nlb;

namespace {
const std::complex<double> kI(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("ode driver reproduces closed-form solutions") {
  SUBCASE("exponential growth") {
    auto rhs = [](double, const std::vector<double>& y,
                  std::vector<double>& dy) { dy[0] = y[0]; };
    OdeResult r = ode_integrate(rhs, 0.0, 5.0, {1.0});
    REQUIRE(r.completed);
    CHECK(std::abs(r.y[0] - std::exp(5.0)) / std::exp(5.0) < 1e-9);
  }
  SUBCASE("harmonic oscillator over many periods") {
    auto rhs = [](double, const std::vector<double>& y,
                  std::vector<double>& dy) {
      dy[0] = y[1];
      dy[1] = -y[0];
    };
    OdeResult r = ode_integrate(rhs, 0.0, 20.0 * kPi, {1.0, 0.0});
    REQUIRE(r.completed);
    CHECK(std::abs(r.y[0] - 1.0) < 1e-6);
    CHECK(std::abs(r.y[1]) < 1e-6);
  }
  SUBCASE("polynomial right-hand side is exact") {
    auto rhs = [](double s, const std::vector<double>&,
                  std::vector<double>& dy) { dy[0] = 3.0 * s * s; };
    OdeResult r = ode_integrate(rhs, 0.0, 2.0, {0.0});
    REQUIRE(r.completed);
    CHECK(std::abs(r.y[0] - 8.0) < 1e-10);
  }
  SUBCASE("monitor can stop integration early") {
    auto rhs = [](double, const std::vector<double>& y,
                  std::vector<double>& dy) { dy[0] = y[0]; };
    OdeResult r = ode_integrate(rhs, 0.0, 50.0, {1.0}, {},
                                [](double, const std::vector<double>& y) {
                                  return y[0] < 10.0;
                                });
    CHECK_FALSE(r.completed);
    CHECK(r.s_reached > std::log(10.0) - 0.5);
    CHECK(r.s_reached < std::log(10.0) + 0.5);
  }
  SUBCASE("rejects reversed interval") {
    auto rhs = [](double, const std::vector<double>&, std::vector<double>& dy) {
      dy[0] = 0.0;
    };
    CHECK_THROWS_AS(ode_integrate(rhs, 1.0, 0.0, {0.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("tridiagonal eigensolver against hand and lattice oracles") {
  SUBCASE("2x2 closed form") {
    auto vals = tridiag_eigenvalues({2.0, 2.0}, {-1.0});
    REQUIRE(vals.size() == 2);
    CHECK(std::abs(vals[0] - 1.0) < 1e-14);
    CHECK(std::abs(vals[1] - 3.0) < 1e-14);
  }
  SUBCASE("free lattice eigenvalues are exact trigonometric values") {
    const Metric1D& m = find_metric("flat_interval").metric;
    const Grid1D grid = build_grid(m, 64, Grading::coordinate);
    const double h = grid.s[1] - grid.s[0];
    std::vector<double> diag, off;
    NeumannOperator::assemble(grid).symmetric_tridiagonal(diag, off);
    auto vals = tridiag_eigenvalues(diag, off);
    REQUIRE(vals.size() == 65);
    const double scale = 4.0 / (h * h);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double exact =
          scale * std::pow(std::sin(static_cast<double>(k) * h / 2.0), 2);
      CHECK(std::abs(vals[k] - exact) < 1e-9 * scale);
    }
  }
  SUBCASE("clamped lattice shifts to half-integer wavenumbers") {
    const Metric1D& m = find_metric("flat_halfline").metric;
    const Grid1D grid = build_grid(m, 64, Grading::coordinate, 8.0);
    const double h = grid.s[1] - grid.s[0];
    const double ell = grid.s.back();
    std::vector<double> diag, off;
    NeumannOperator::assemble(grid, NeumannOperator::RightEnd::dirichlet)
        .symmetric_tridiagonal(diag, off);
    auto vals = tridiag_eigenvalues(diag, off);
    REQUIRE(vals.size() == 64);
    const double scale = 4.0 / (h * h);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double omega = (static_cast<double>(k) + 0.5) * kPi / ell;
      const double exact = scale * std::pow(std::sin(omega * h / 2.0), 2);
      CHECK(std::abs(vals[k] - exact) < 1e-9 * scale);
    }
  }
  SUBCASE("eigensystem returns an orthonormal diagonalization") {
    Rng rng(99);
    const std::size_t n = 50;
    std::vector<double> diag(n), off(n - 1);
    for (auto& d : diag) d = rng.uniform(0.0, 4.0);
    for (auto& e : off) e = rng.uniform(-1.0, 1.0);
    TridiagEigen sys = tridiag_eigensystem(diag, off);
    REQUIRE(sys.values.size() == n);
    double max_resid = 0.0, max_ortho = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double* v = sys.vectors.data() + k * n;
      for (std::size_t i = 0; i < n; ++i) {
        double av = diag[i] * v[i];
        if (i > 0) av += off[i - 1] * v[i - 1];
        if (i + 1 < n) av += off[i] * v[i + 1];
        max_resid = std::max(max_resid, std::abs(av - sys.values[k] * v[i]));
      }
      for (std::size_t l = k; l < n; ++l) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          dot += v[i] * sys.vectors[l * n + i];
        max_ortho = std::max(max_ortho, std::abs(dot - (l == k ? 1.0 : 0.0)));
      }
    }
    CHECK(max_resid < 1e-12);
    CHECK(max_ortho < 1e-12);
    CHECK(std::is_sorted(sys.values.begin(), sys.values.end()));
  }
  SUBCASE("shape validation") {
    CHECK_THROWS_AS(tridiag_eigenvalues({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(tridiag_eigenvalues({1.0, 2.0}, {}), std::invalid_argument);
  }
}

TEST_CASE("weyl shooting on the finite-length metric matches closed forms") {
  // In arclength the equation f'' = f from anchor s_a = 0.5 has solutions
  // cosh(t) and sinh(t), t = s - s_a; remaining length is 0.5, so the limit
  // norms are int_0^{1/2} cosh^2 = 1/4 + sinh(1)/4 and
  // int_0^{1/2} sinh^2 = sinh(1)/4 - 1/4.
  const Metric1D& m = find_metric("x4_example").metric;
  WeylReport rep = weyl_classify(m, 1.0, 2.0);
  CHECK(rep.verdict == EndVerdict::limit_circle);
  REQUIRE(rep.solutions[0].log_norm.size() == 12);
  REQUIRE(rep.solutions[1].log_norm.size() == 12);
  CHECK(rep.solutions[0].converged);
  CHECK(rep.solutions[1].converged);

  const double cosh_limit = 0.25 + std::sinh(1.0) / 4.0;
  const double sinh_limit = std::sinh(1.0) / 4.0 - 0.25;
  const double got_cosh = std::exp(rep.solutions[0].log_norm.back());
  const double got_sinh = std::exp(rep.solutions[1].log_norm.back());
  CHECK(std::abs(got_cosh - cosh_limit) / cosh_limit < 1e-8);
  CHECK(std::abs(got_sinh - sinh_limit) / sinh_limit < 1e-8);

  // Bounded-solution sanity: limit norm below remaining measure times sup.
  const double sup2 = std::pow(std::cosh(0.5), 2);
  CHECK(got_cosh <= 0.5 * sup2);

  // Norm sequence is nondecreasing along checkpoints.
  CHECK(std::is_sorted(rep.solutions[0].log_norm.begin(),
                       rep.solutions[0].log_norm.end()));
  CHECK(rep.evidence.find("limit-circle") != std::string::npos);
}

TEST_CASE("weyl verdicts across the registry") {
  SUBCASE("flat half-line diverges explosively") {
    const Metric1D& m = find_metric("flat_halfline").metric;
    WeylReport rep = weyl_classify(m, 1.0, 1.0);
    CHECK(rep.verdict == EndVerdict::limit_point);
    CHECK(rep.solutions[0].diverged);  // cosh branch exceeds e^300
  }
  SUBCASE("log-length metric grows too slowly to overflow yet diverges") {
    // Total arclength of 1/x^2 to coordinate 1e12 is only ~28, so the
    // solutions reach every checkpoint; the tail increments stay O(1).
    const Metric1D& m = find_metric("inv_x2").metric;
    WeylReport rep = weyl_classify(m, kI, 2.0);
    CHECK(rep.verdict == EndVerdict::limit_point);
    for (const auto& sol : rep.solutions) {
      CHECK_FALSE(sol.diverged);
      CHECK(sol.log_norm.size() == 12);
      CHECK_FALSE(sol.converged);
      CHECK(sol.last_rel_increment > 0.5);
    }
  }
  SUBCASE("verdicts agree at +i, -i, and 1, and across anchors") {
    for (const auto& entry : metric_registry()) {
      if (!entry.metric.has_open_end()) continue;
      const Metric1D& m = entry.metric;
      const EndVerdict vp = weyl_classify(m, kI).verdict;
      const EndVerdict vm = weyl_classify(m, -kI).verdict;
      const EndVerdict v1 = weyl_classify(m, 1.0).verdict;
      const EndVerdict far = weyl_classify(m, kI, m.x_min + 3.0).verdict;
      CAPTURE(entry.metric.label);
      CHECK(vp == vm);
      CHECK(vp == v1);
      CHECK(vp == far);
      CHECK(vp != EndVerdict::indeterminate);
    }
  }
  SUBCASE("input validation") {
    const Metric1D& open = find_metric("flat_halfline").metric;
    const Metric1D& compact = find_metric("flat_interval").metric;
    CHECK_THROWS_AS(weyl_classify(compact, kI), std::invalid_argument);
    CHECK_THROWS_AS(weyl_classify(open, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(weyl_classify(open, kI, open.x_min),
                    std::invalid_argument);
  }
}

TEST_CASE("deficiency indices and the completeness concordance") {
  SUBCASE("finite-length example is not essentially self-adjoint") {
    DeficiencyReport rep = deficiency_indices(find_metric("x4_example").metric);
    CHECK(rep.n_plus == 1);
    CHECK(rep.n_minus == 1);
    CHECK_FALSE(rep.essentially_selfadjoint);
    CHECK(rep.decided);
    CHECK(rep.ends[0] == EndVerdict::boundary_end);
    CHECK(rep.ends[1] == EndVerdict::limit_circle);
    CHECK_FALSE(rep.completeness.complete);
    REQUIRE(rep.runs.size() == 3);
  }
  SUBCASE("compact interval needs no shooting") {
    DeficiencyReport rep =
        deficiency_indices(find_metric("flat_interval").metric);
    CHECK(rep.n_plus == 0);
    CHECK(rep.n_minus == 0);
    CHECK(rep.essentially_selfadjoint);
    CHECK(rep.runs.empty());
    CHECK(rep.ends[0] == EndVerdict::boundary_end);
    CHECK(rep.ends[1] == EndVerdict::boundary_end);
  }
  SUBCASE("registry-wide verdicts match the catalog expectations") {
    for (const auto& entry : metric_registry()) {
      DeficiencyReport rep = deficiency_indices(entry.metric);
      CAPTURE(entry.metric.label);
      CHECK(rep.decided);
      CHECK(rep.essentially_selfadjoint == entry.expected_esa);
      // One theorem direction is unconditional: complete implies ESA.
      if (rep.completeness.complete) CHECK(rep.essentially_selfadjoint);
    }
  }
}

TEST_CASE("boundary-condition sensitivity under truncation") {
  SUBCASE("flat half-line: gaps track pi^2 (k - 3/4) / L^2 and vanish") {
    const Metric1D& m = find_metric("flat_halfline").metric;
    BcTable table = bc_sensitivity(m, {10.0, 20.0, 40.0, 80.0}, 200, 3);
    REQUIRE(table.rows.size() == 4);
    std::vector<std::size_t> want_cells = {200, 400, 800, 1600};
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const BcRow& row = table.rows[r];
      REQUIRE(row.converged);
      CHECK(row.n_cells == want_cells[r]);
      CHECK(std::abs(row.arclength - row.truncation) < 1e-9);
      // Lowest Neumann eigenvalue is the constant mode.
      CHECK(std::abs(row.neumann[0]) < 1e-8);
      for (std::size_t k = 0; k < 3; ++k) {
        const double kk = static_cast<double>(k) + 1.0;
        const double expect =
            kPi * kPi * (kk - 0.75) / (row.truncation * row.truncation);
        CHECK(std::abs(row.gap[k] - expect) / expect < 1e-3);
      }
    }
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t r = 1; r < table.rows.size(); ++r)
        CHECK(table.rows[r].gap[k] < table.rows[r - 1].gap[k]);
    CHECK(table.final_gaps()[0] < 1e-3);
  }
  SUBCASE("finite-length example keeps a persistent gap") {
    const Metric1D& m = find_metric("x4_example").metric;
    BcTable table = bc_sensitivity(m, {10.0, 20.0, 40.0, 80.0}, 512, 1);
    REQUIRE(table.rows.size() == 4);
    for (const BcRow& row : table.rows) {
      REQUIRE(row.converged);
      CHECK(row.gap[0] > 0.1);
    }
    // The surviving gap is the lowest clamped eigenvalue ~ (pi / 2 S)^2.
    const BcRow& last = table.rows.back();
    const double s_total = last.arclength;
    const double expect = std::pow(kPi / (2.0 * s_total), 2);
    CHECK(std::abs(last.gap[0] - expect) / expect < 1e-2);
    CHECK(last.gap[0] > 2.4);
    CHECK(last.gap[0] < 2.7);
    // Truncation barely changes the geometry, so the gap is stable.
    CHECK(std::abs(table.rows[2].gap[0] - table.rows[3].gap[0]) < 0.2);
  }
  SUBCASE("identical requests produce identical tables") {
    const Metric1D& m = find_metric("x_squared").metric;
    BcTable a = bc_sensitivity(m, {5.0, 9.0}, 100, 2);
    BcTable b = bc_sensitivity(m, {5.0, 9.0}, 100, 2);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      CHECK(a.rows[r].neumann == b.rows[r].neumann);
      CHECK(a.rows[r].dirichlet == b.rows[r].dirichlet);
      CHECK(a.rows[r].gap == b.rows[r].gap);
    }
  }
  SUBCASE("input validation") {
    const Metric1D& open = find_metric("flat_halfline").metric;
    const Metric1D& compact = find_metric("flat_interval").metric;
    CHECK_THROWS_AS(bc_sensitivity(compact, {1.0, 2.0}, 64, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bc_sensitivity(open, {20.0, 10.0}, 64, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bc_sensitivity(open, {}, 64, 1), std::invalid_argument);
  }
}
