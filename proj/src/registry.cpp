#include "nlb/registry.hpp"

#include <cmath>

#include "nlb/error.hpp"

namespace nlb {
namespace {

std::vector<MetricEntry> make_metrics() {
  std::vector<MetricEntry> v;

  {
    MetricEntry e;
    e.metric = {"flat_halfline", 0.0,
                std::numeric_limits<double>::infinity(),
                [](double) { return 1.0; }, [](double) { return 0.0; }};
    e.description = "flat half-line [0, inf)";
    e.expected_complete = true;
    e.expected_esa = true;
    e.basis = "closed form";
    e.closed_distance = [](double p, double q) { return std::abs(q - p); };
    e.default_truncation = 40.0;
    e.default_cells = 1024;
    v.push_back(std::move(e));
  }
  {
    MetricEntry e;
    e.metric = {"flat_interval", 0.0, M_PI, [](double) { return 1.0; },
                [](double) { return 0.0; }};
    e.description = "flat compact interval [0, pi]";
    e.expected_complete = true;
    e.expected_esa = true;  // both ends are true boundary, no open end
    e.basis = "closed form";
    e.closed_distance = [](double p, double q) { return std::abs(q - p); };
    e.default_truncation = M_PI;
    e.default_cells = 256;
    v.push_back(std::move(e));
  }
  {
    MetricEntry e;
    e.metric = {"x4_example", 1.0, std::numeric_limits<double>::infinity(),
                [](double x) { return 1.0 / (x * x * x * x); },
                [](double x) { return -4.0 / (x * x * x * x * x); }};
    e.description = "g = x^-4 on [1, inf): finite total length 1";
    e.expected_complete = false;
    e.expected_esa = false;
    e.basis = "closed form: arclength s(x) = 1 - 1/x";
    e.closed_distance = [](double p, double q) {
      return std::abs(1.0 / p - 1.0 / q);
    };
    e.default_truncation = 10.0;
    e.default_cells = 1000;
    e.default_grading = Grading::arclength;
    v.push_back(std::move(e));
  }
  {
    MetricEntry e;
    e.metric = {"inv_x2", 1.0, std::numeric_limits<double>::infinity(),
                [](double x) { return 1.0 / (x * x); },
                [](double x) { return -2.0 / (x * x * x); }};
    e.description = "g = x^-2 on [1, inf): logarithmic arclength";
    e.expected_complete = true;
    e.expected_esa = true;
    e.basis = "closed form: arclength s(x) = log x";
    e.closed_distance = [](double p, double q) {
      return std::abs(std::log(q) - std::log(p));
    };
    e.default_truncation = std::exp(25.0);
    e.default_cells = 1024;
    e.default_grading = Grading::arclength;
    v.push_back(std::move(e));
  }
  {
    MetricEntry e;
    e.metric = {"x_squared", 1.0, std::numeric_limits<double>::infinity(),
                [](double x) { return x * x; }, [](double x) { return 2.0 * x; }};
    e.description = "g = x^2 on [1, inf): quadratic arclength growth";
    e.expected_complete = true;
    e.expected_esa = true;
    e.basis = "closed form: arclength s(x) = (x^2 - 1)/2";
    e.closed_distance = [](double p, double q) {
      return std::abs(q * q - p * p) / 2.0;
    };
    e.default_truncation = std::sqrt(51.0);  // arclength 25
    e.default_cells = 1024;
    e.default_grading = Grading::arclength;
    v.push_back(std::move(e));
  }
  {
    MetricEntry e;
    e.metric = {"exp_decay", 0.0, std::numeric_limits<double>::infinity(),
                [](double x) { return std::exp(-2.0 * x); },
                [](double x) { return -2.0 * std::exp(-2.0 * x); }};
    e.description = "g = exp(-2x) on [0, inf): finite total length 1";
    e.expected_complete = false;
    e.expected_esa = false;
    e.basis = "derived: arclength s(x) = 1 - exp(-x), same finite-length "
              "structure as x4_example";
    e.closed_distance = [](double p, double q) {
      return std::abs(std::exp(-p) - std::exp(-q));
    };
    e.default_truncation = 6.0;
    e.default_cells = 512;
    e.default_grading = Grading::arclength;
    v.push_back(std::move(e));
  }
  return v;
}

std::vector<SurfaceEntry> make_surfaces() {
  std::vector<SurfaceEntry> v;
  {
    SurfaceEntry e;
    e.surface = {"flat_cylinder", 1.0, [](double) { return 1.0; },
                 [](double) { return 0.0; }};
    e.description = "product cylinder [0,1] x S^1, warp = 1";
    e.basis = "closed form: product metric, separable spectrum";
    v.push_back(std::move(e));
  }
  {
    SurfaceEntry e;
    e.surface = {"cosh_cylinder", 1.0, [](double r) { return std::cosh(r); },
                 [](double r) { return std::sinh(r); }};
    e.description = "warped cylinder, warp = cosh r (curvature -1)";
    e.basis = "derived: warp and derivatives in closed form";
    v.push_back(std::move(e));
  }
  return v;
}

template <class T>
const T* find_by_label(const std::vector<T>& entries, const std::string& label) {
  for (const auto& e : entries)
    if constexpr (requires { e.metric.label; }) {
      if (e.metric.label == label) return &e;
    } else {
      if (e.surface.label == label) return &e;
    }
  return nullptr;
}

template <class T>
std::string label_list(const std::vector<T>& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += ", ";
    if constexpr (requires { e.metric.label; })
      out += e.metric.label;
    else
      out += e.surface.label;
  }
  return out;
}

}  // namespace

const std::vector<MetricEntry>& metric_registry() {
  static const std::vector<MetricEntry> reg = make_metrics();
  return reg;
}

const std::vector<SurfaceEntry>& surface_registry() {
  static const std::vector<SurfaceEntry> reg = make_surfaces();
  return reg;
}

const MetricEntry& find_metric(const std::string& label) {
  if (const auto* e = find_by_label(metric_registry(), label)) return *e;
  throw ConfigError("unknown metric '" + label + "'; known: " +
                    label_list(metric_registry()));
}

const SurfaceEntry& find_surface(const std::string& label) {
  if (const auto* e = find_by_label(surface_registry(), label)) return *e;
  throw ConfigError("unknown surface '" + label + "'; known: " +
                    label_list(surface_registry()));
}

bool has_metric(const std::string& label) {
  return find_by_label(metric_registry(), label) != nullptr;
}

bool has_surface(const std::string& label) {
  return find_by_label(surface_registry(), label) != nullptr;
}

}  // namespace nlb
