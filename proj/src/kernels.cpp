#include "nlb/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlb::kernels {
namespace {

// Serial-within-block partial sums combined in block order. The combine
// order is what makes the parallel path bitwise-equal to the serial one.
template <class BlockFn>
double blocked_reduce(std::size_t n, bool parallel, BlockFn block_sum) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return n == 0 ? 0.0 : block_sum(0, n);
  std::vector<double> partial(nblocks);
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(nblocks); ++k) {
      const std::size_t lo = static_cast<std::size_t>(k) * kBlock;
      partial[k] = block_sum(lo, std::min(lo + kBlock, n));
    }
  } else
#else
  (void)parallel;
#endif
  {
    for (std::size_t k = 0; k < nblocks; ++k) {
      const std::size_t lo = k * kBlock;
      partial[k] = block_sum(lo, std::min(lo + kBlock, n));
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

bool want_parallel(std::size_t n) {
#ifdef _OPENMP
  return n >= kParallelCutoff && omp_get_max_threads() > 1;
#else
  (void)n;
  return false;
#endif
}

}  // namespace

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  return blocked_reduce(a.size(), false, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_reduce(a.size(), want_parallel(a.size()),
                        [&](std::size_t lo, std::size_t hi) {
                          double s = 0.0;
                          for (std::size_t i = lo; i < hi; ++i)
                            s += a[i] * b[i];
                          return s;
                        });
}

double dot3_serial(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b) {
  return blocked_reduce(w.size(), false, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * a[i] * b[i];
    return s;
  });
}

double dot3(std::span<const double> w, std::span<const double> a,
            std::span<const double> b) {
  return blocked_reduce(w.size(), want_parallel(w.size()),
                        [&](std::size_t lo, std::size_t hi) {
                          double s = 0.0;
                          for (std::size_t i = lo; i < hi; ++i)
                            s += w[i] * a[i] * b[i];
                          return s;
                        });
}

namespace {

template <class Pow>
double sum_pow_impl(std::span<const double> w, std::span<const double> f,
                    bool parallel, Pow pw) {
  return blocked_reduce(w.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * pw(f[i]);
    return s;
  });
}

double sum_pow_any(std::span<const double> w, std::span<const double> f,
                   double p, bool parallel) {
  if (p == 2.0)
    return sum_pow_impl(w, f, parallel, [](double v) { return v * v; });
  if (p == 1.0)
    return sum_pow_impl(w, f, parallel, [](double v) { return std::abs(v); });
  return sum_pow_impl(w, f, parallel,
                      [p](double v) { return std::pow(std::abs(v), p); });
}

}  // namespace

double sum_pow_serial(std::span<const double> w, std::span<const double> f,
                      double p) {
  return sum_pow_any(w, f, p, false);
}

double sum_pow(std::span<const double> w, std::span<const double> f,
               double p) {
  return sum_pow_any(w, f, p, want_parallel(w.size()));
}

void axpy_serial(double alpha, std::span<const double> x,
                 std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
#ifdef _OPENMP
  if (want_parallel(x.size())) {
    const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) y[i] += alpha * x[i];
    return;
  }
#endif
  axpy_serial(alpha, x, y);
}

void apply_tridiag_serial(std::span<const double> lower,
                          std::span<const double> diag,
                          std::span<const double> upper,
                          std::span<const double> in, std::span<double> out) {
  const std::size_t n = diag.size();
  if (n == 1) {
    out[0] = diag[0] * in[0];
    return;
  }
  out[0] = diag[0] * in[0] + upper[0] * in[1];
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = lower[i] * in[i - 1] + diag[i] * in[i] + upper[i] * in[i + 1];
  out[n - 1] = lower[n - 1] * in[n - 2] + diag[n - 1] * in[n - 1];
}

void apply_tridiag(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> in,
                   std::span<double> out) {
  const std::size_t n = diag.size();
#ifdef _OPENMP
  if (want_parallel(n)) {
#pragma omp parallel for schedule(static)
    for (long long i = 1; i < static_cast<long long>(n) - 1; ++i)
      out[i] = lower[i] * in[i - 1] + diag[i] * in[i] + upper[i] * in[i + 1];
    out[0] = diag[0] * in[0] + upper[0] * in[1];
    out[n - 1] = lower[n - 1] * in[n - 2] + diag[n - 1] * in[n - 1];
    return;
  }
#endif
  apply_tridiag_serial(lower, diag, upper, in, out);
}

namespace {

inline double flux_row(std::span<const double> c, std::span<const double> w,
                       bool dirichlet_tail, std::span<const double> in,
                       std::size_t i, std::size_t n) {
  double acc = 0.0;
  if (i > 0) acc += c[i - 1] * (in[i] - in[i - 1]);
  if (i + 1 < n)
    acc += c[i] * (in[i] - in[i + 1]);
  else if (dirichlet_tail)
    acc += c[i] * in[i];
  return acc / w[i];
}

}  // namespace

void apply_flux1d_serial(std::span<const double> c, std::span<const double> w,
                         bool dirichlet_tail, std::span<const double> in,
                         std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i)
    out[i] = flux_row(c, w, dirichlet_tail, in, i, n);
}

void apply_flux1d(std::span<const double> c, std::span<const double> w,
                  bool dirichlet_tail, std::span<const double> in,
                  std::span<double> out) {
  const std::size_t n = out.size();
#ifdef _OPENMP
  if (want_parallel(n)) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      out[i] = flux_row(c, w, dirichlet_tail, in, static_cast<std::size_t>(i), n);
    return;
  }
#endif
  apply_flux1d_serial(c, w, dirichlet_tail, in, out);
}

namespace {

inline void cylinder_row(std::span<const double> cr, std::span<const double> ct,
                         std::span<const double> w, std::size_t m,
                         std::span<const double> in, std::span<double> out,
                         std::size_t i, std::size_t nr) {
  const double* fi = in.data() + i * m;
  double* oi = out.data() + i * m;
  const double cin = i > 0 ? cr[i - 1] : 0.0;    // inner radial interface
  const double cout = i < nr ? cr[i] : 0.0;      // outer radial interface
  const double cth = ct[i];
  const double inv_w = 1.0 / w[i];
  const double* fdn = i > 0 ? in.data() + (i - 1) * m : nullptr;
  const double* fup = i < nr ? in.data() + (i + 1) * m : nullptr;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t jl = j == 0 ? m - 1 : j - 1;
    const std::size_t jr = j + 1 == m ? 0 : j + 1;
    double acc = cth * (2.0 * fi[j] - fi[jl] - fi[jr]);
    if (fdn) acc += cin * (fi[j] - fdn[j]);
    if (fup) acc += cout * (fi[j] - fup[j]);
    oi[j] = acc * inv_w;
  }
}

}  // namespace

void apply_cylinder_serial(std::span<const double> cr,
                           std::span<const double> ct,
                           std::span<const double> w, std::size_t m,
                           std::span<const double> in, std::span<double> out) {
  const std::size_t nr = w.size() - 1;
  for (std::size_t i = 0; i <= nr; ++i)
    cylinder_row(cr, ct, w, m, in, out, i, nr);
}

void apply_cylinder(std::span<const double> cr, std::span<const double> ct,
                    std::span<const double> w, std::size_t m,
                    std::span<const double> in, std::span<double> out) {
  const std::size_t nr = w.size() - 1;
#ifdef _OPENMP
  if (want_parallel(in.size())) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i <= static_cast<long long>(nr); ++i)
      cylinder_row(cr, ct, w, m, in, out, static_cast<std::size_t>(i), nr);
    return;
  }
#endif
  apply_cylinder_serial(cr, ct, w, m, in, out);
}

}  // namespace nlb::kernels
