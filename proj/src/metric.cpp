#include "nlb/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nlb/quadrature.hpp"

namespace nlb {
namespace {

void check_in_domain(const Metric1D& m, double x) {
  if (!(x >= m.x_min) || (std::isfinite(m.x_max) && !(x <= m.x_max)))
    throw std::invalid_argument("coordinate " + std::to_string(x) +
                                " outside domain of metric '" + m.label + "'");
}

}  // namespace

double geodesic_distance(const Metric1D& m, double p, double q) {
  check_in_domain(m, p);
  check_in_domain(m, q);
  if (p > q) std::swap(p, q);
  if (p == q) return 0.0;
  auto ds = [&m](double x) { return std::sqrt(m.g(x)); };
  return integrate_auto(ds, p, q, 1e-12).value;
}

double arclength_from_boundary(const Metric1D& m, double x) {
  return geodesic_distance(m, m.x_min, x);
}

namespace {

double rel_rms(const std::vector<double>& model, const std::vector<double>& data) {
  double s = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double r = (model[k] - data[k]) / data[k];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(data.size()));
}

CompletenessFit fit_log(const std::vector<double>& L,
                        const std::vector<double>& I) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double x = std::log(L[k]);
    num += I[k] * x;
    den += x * x;
  }
  CompletenessFit f;
  f.model = "log";
  f.c = num / den;
  std::vector<double> model(L.size());
  for (std::size_t k = 0; k < L.size(); ++k) model[k] = f.c * std::log(L[k]);
  f.residual = rel_rms(model, I);
  return f;
}

CompletenessFit fit_power(const std::vector<double>& L,
                          const std::vector<double>& I) {
  // linear LSQ on ln I = ln c + alpha ln L
  const auto n = static_cast<double>(L.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double x = std::log(L[k]);
    const double y = std::log(I[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  CompletenessFit f;
  f.model = "power";
  f.alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.c = std::exp((sy - f.alpha * sx) / n);
  std::vector<double> model(L.size());
  for (std::size_t k = 0; k < L.size(); ++k)
    model[k] = f.c * std::pow(L[k], f.alpha);
  f.residual = rel_rms(model, I);
  return f;
}

CompletenessFit fit_bounded(const std::vector<double>& L,
                            const std::vector<double>& I) {
  // linear LSQ on I = c - d / L
  const auto n = static_cast<double>(L.size());
  double su = 0.0, si = 0.0, suu = 0.0, sui = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double u = 1.0 / L[k];
    su += u;
    si += I[k];
    suu += u * u;
    sui += u * I[k];
  }
  const double det = n * suu - su * su;
  CompletenessFit f;
  f.model = "bounded";
  f.d = -(n * sui - su * si) / det;
  f.c = (si + f.d * su) / n;
  std::vector<double> model(L.size());
  for (std::size_t k = 0; k < L.size(); ++k) model[k] = f.c - f.d / L[k];
  f.residual = rel_rms(model, I);
  return f;
}

}  // namespace

CompletenessReport is_complete(const Metric1D& m) {
  CompletenessReport rep;
  if (!m.has_open_end()) {
    rep.verdict = "complete";
    rep.decided = true;
    rep.complete = true;
    rep.evidence = "compact interval, total length " +
                   std::to_string(geodesic_distance(m, m.x_min, m.x_max));
    return rep;
  }
  // accumulate decade by decade so narrow features near the boundary are
  // never straddled by a single wide panel
  double L = std::max(10.0, m.x_min + 9.0);
  double acc = arclength_from_boundary(m, L);
  for (int k = 0; k < 6; ++k) {
    rep.cutoffs.push_back(L);
    rep.partials.push_back(acc);
    if (k + 1 < 6) {
      acc += geodesic_distance(m, L, 10.0 * L);
      L *= 10.0;
    }
  }
  rep.fits.push_back(fit_log(rep.cutoffs, rep.partials));
  rep.fits.push_back(fit_power(rep.cutoffs, rep.partials));
  rep.fits.push_back(fit_bounded(rep.cutoffs, rep.partials));
  const auto best = std::min_element(
      rep.fits.begin(), rep.fits.end(),
      [](const auto& a, const auto& b) { return a.residual < b.residual; });
  rep.best_model = best->model;
  char buf[160];
  if (best->residual > 0.1) {
    rep.verdict = "indeterminate";
    std::snprintf(buf, sizeof buf,
                  "no envelope model fits: best (%s) has relative residual %.2g",
                  best->model.c_str(), best->residual);
    rep.evidence = buf;
    return rep;
  }
  rep.decided = true;
  if (best->model == "bounded" ||
      (best->model == "power" && best->alpha < 0.02)) {
    rep.verdict = "incomplete";
    rep.complete = false;
    std::snprintf(buf, sizeof buf,
                  "partial arclengths level off near %.6g (best fit %s, "
                  "relative residual %.2g)",
                  best->c, best->model.c_str(), best->residual);
  } else {
    rep.verdict = "complete";
    rep.complete = true;
    if (best->model == "log")
      std::snprintf(buf, sizeof buf,
                    "arclength grows like %.3g*log(L) (relative residual %.2g)",
                    best->c, best->residual);
    else
      std::snprintf(buf, sizeof buf,
                    "arclength grows like %.3g*L^%.3g (relative residual %.2g)",
                    best->c, best->alpha, best->residual);
  }
  rep.evidence = buf;
  return rep;
}

}  // namespace nlb
