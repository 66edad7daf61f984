#pragma once

#include <cstddef>
#include <span>

// Hot loops behind the operator and propagators. Every kernel has a serial
// reference (`*_serial`) and a dispatching front that may run OpenMP-parallel.
// Reductions are blocked with a fixed block size and combined in index order,
// so the parallel results are bitwise identical to the serial ones regardless
// of thread count. Tests and the benchmark target compare the two paths.

namespace nlb::kernels {

inline constexpr std::size_t kBlock = 4096;

// Below this size the dispatchers stay serial; fork/join overhead dominates.
inline constexpr std::size_t kParallelCutoff = 1 << 14;

bool openmp_enabled();
int max_threads();

double dot_serial(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

// sum_i w[i] * a[i] * b[i]
double dot3_serial(std::span<const double> w, std::span<const double> a,
                   std::span<const double> b);
double dot3(std::span<const double> w, std::span<const double> a,
            std::span<const double> b);

// sum_i w[i] * |f[i]|^p
double sum_pow_serial(std::span<const double> w, std::span<const double> f,
                      double p);
double sum_pow(std::span<const double> w, std::span<const double> f, double p);

// y += alpha * x
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// out[i] = lower[i]*in[i-1] + diag[i]*in[i] + upper[i]*in[i+1]
// (lower[0] and upper[n-1] are ignored)
void apply_tridiag_serial(std::span<const double> lower,
                          std::span<const double> diag,
                          std::span<const double> upper,
                          std::span<const double> in, std::span<double> out);
void apply_tridiag(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> in,
                   std::span<double> out);

// Graph-Laplacian row in flux form, n = out.size() active nodes:
// out[i] = [c[i-1]*(in[i]-in[i-1]) + c[i]*(in[i]-in[i+1])] / w[i],
// end terms dropped. With dirichlet_tail, in[n] is a phantom zero and the
// last row keeps its c[n-1]*in[n-1] term. Differences are formed before
// scaling, so constants map to exactly zero.
void apply_flux1d_serial(std::span<const double> c, std::span<const double> w,
                         bool dirichlet_tail, std::span<const double> in,
                         std::span<double> out);
void apply_flux1d(std::span<const double> c, std::span<const double> w,
                  bool dirichlet_tail, std::span<const double> in,
                  std::span<double> out);

// 5-point warped-cylinder stencil, periodic in the second index.
// Field layout: row-major, node (i,j) at i*m + j, i = 0..nr, j = 0..m-1.
// out(i,j) = [cr(i-1)(f(i,j)-f(i-1,j)) + cr(i)(f(i,j)-f(i+1,j))
//             + ct(i)(2 f(i,j) - f(i,j-1) - f(i,j+1))] / w(i)
// with the radial terms dropped at i = 0 and i = nr (zero-flux ends).
void apply_cylinder_serial(std::span<const double> cr,
                           std::span<const double> ct,
                           std::span<const double> w, std::size_t m,
                           std::span<const double> in, std::span<double> out);
void apply_cylinder(std::span<const double> cr, std::span<const double> ct,
                    std::span<const double> w, std::size_t m,
                    std::span<const double> in, std::span<double> out);

}  // namespace nlb::kernels
