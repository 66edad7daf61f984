#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlb/grid.hpp"
#include "nlb/neumann_operator.hpp"

namespace nlb {

/// e^{-tH} f by Crank-Nicolson, substepped so dt * spectral_bound <= 0.5.
/// Unconditionally stable, mass-conserving, contractive in the weighted
/// norm. 1D systems are solved by the Thomas algorithm; 2D by conjugate
/// gradients in the weighted inner product (the shifted operator is
/// self-adjoint positive there).
std::vector<double> heat_apply(const NeumannOperator& op, double t,
                               std::span<const double> f);

/// cos(s sqrt(H)) f by leapfrog with zero initial velocity,
/// dt <= 0.9 * 2 / sqrt(spectral_bound). If energy_drift is non-null it
/// receives the maximum relative drift of the discrete invariant
/// ||(u_{k+1}-u_k)/dt||_w^2 + <H u_k, u_{k+1}>_w over the run.
std::vector<double> wave_cos_apply(const NeumannOperator& op, double s,
                                   std::span<const double> f,
                                   double* energy_drift = nullptr);

/// Dense eigendecomposition path (1D, up to 1300 nodes): the reference
/// implementation for both propagators. Exact semigroup and cosine
/// functional equations up to roundoff.
class DenseSpectral {
 public:
  static DenseSpectral build(const NeumannOperator& op);

  std::vector<double> heat(double t, std::span<const double> f) const;
  std::vector<double> wave_cos(double s, std::span<const double> f) const;
  const std::vector<double>& eigenvalues() const { return values_; }
  /// Node-basis eigenvector k (W^{-1/2} times the orthonormal one).
  std::vector<double> eigenvector(std::size_t k) const;

 private:
  std::vector<double> apply_filtered(std::span<const double> f,
                                     std::span<const double> filter) const;
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::vector<double> vectors_;  // column-major, T-basis
  std::vector<double> sqrt_w_, inv_sqrt_w_;
};

/// One verified inequality sample.
struct PropagationSample {
  double t_or_s = 0.0;
  double observed = 0.0;  // |<P f1, f2>_w|
  double bound = 0.0;     // inequality right-hand side (before slack/floor)
  double threshold = 0.0; // what observed was actually compared against
  double ratio = 0.0;     // observed / threshold
  bool pass = false;
};

struct PropagationPair {
  std::vector<std::size_t> u1, u2;
  double rho = 0.0;          // geodesic distance between the set hulls
  double norm1 = 0.0, norm2 = 0.0;
  std::vector<PropagationSample> samples;
  // finite-speed only: empirical support front per sample
  std::vector<double> support_radius;
  std::vector<double> support_bound;
};

struct PropagationReport {
  std::vector<PropagationPair> pairs;
  double slack = 0.0;
  double floor = 0.0;
  double max_ratio = 0.0;
  bool all_pass = true;

  void absorb(const PropagationReport& other);
};

/// Gaussian off-diagonal heat bound with C=1, a=0:
///   |<e^{-tH} f1, f2>_w| <= slack * e^{-rho^2/(4t)} ||f1|| ||f2||,
/// f_i being one-cell cosine-tapered indicators of U_i normalized in the
/// weighted norm. Times below t_min = (2 max cell arclength)^2 are refused:
/// the continuum bound does not survive below the grid scale. The
/// comparison threshold is floored at 1e-13 ||f1|| ||f2|| because the CN
/// solution itself carries roundoff of that size where the true kernel has
/// underflowed.
PropagationReport davies_gaffney_check(const NeumannOperator& op,
                                       const Grid1D& grid,
                                       const std::vector<std::size_t>& u1,
                                       const std::vector<std::size_t>& u2,
                                       const std::vector<double>& t_list);

/// Finite propagation speed: |<cos(s sqrt(H)) f1, f2>_w| stays below
/// 1e-6 ||f1|| ||f2|| for every s <= rho - margin, margin = 3 max cell
/// arclength; additionally the radius holding all but 1e-8 of the wave
/// energy (measured from the hull of U1) must satisfy R(s) <= s + margin.
PropagationReport finite_speed_check(const NeumannOperator& op,
                                     const Grid1D& grid,
                                     const std::vector<std::size_t>& u1,
                                     const std::vector<std::size_t>& u2,
                                     const std::vector<double>& s_list);

/// Smallest s at which |<cos(s sqrt(H)) f1, f2>_w| first reaches
/// threshold * ||f1|| ||f2||, located by bisection; the wave front arrival
/// time, to be compared with rho.
double front_arrival_time(const NeumannOperator& op, const Grid1D& grid,
                          const std::vector<std::size_t>& u1,
                          const std::vector<std::size_t>& u2,
                          double threshold = 1e-2);

/// Outward normal derivative of e^{-tH} f at the boundary nodes.
std::vector<double> heat_boundary_flux(const NeumannOperator& op,
                                       const Grid1D& grid, double t,
                                       std::span<const double> f);

/// Cosine-tapered normalized indicator of a node set (support stays inside
/// the set; the one-cell taper suppresses Gibbs tails in spectral space).
std::vector<double> tapered_indicator(const NeumannOperator& op,
                                      const std::vector<std::size_t>& nodes);

/// Geodesic distance between two 1D node sets through the arclength table.
double set_distance(const Grid1D& grid, const std::vector<std::size_t>& u1,
                    const std::vector<std::size_t>& u2);

}  // namespace nlb
