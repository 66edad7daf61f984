#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlb/grid.hpp"
#include "nlb/metric.hpp"
#include "nlb/surface.hpp"

namespace nlb {

/// Catalog entry for a 1D model metric. `expected_*` are the reference
/// classifications the verification suites check against; `basis` records
/// how each reference value is known (closed form vs derived here).
struct MetricEntry {
  Metric1D metric;
  std::string description;
  bool expected_complete = true;
  bool expected_esa = true;  // essential self-adjointness of the Neumann form
  std::string basis;
  // closed-form geodesic distance, when one exists (oracle for tests)
  std::function<double(double, double)> closed_distance;
  // sensible scenario defaults
  double default_truncation = 40.0;
  std::size_t default_cells = 1024;
  Grading default_grading = Grading::coordinate;
};

struct SurfaceEntry {
  WarpedSurface2D surface;
  std::string description;
  std::string basis;
  std::size_t default_nr = 128;
  std::size_t default_ntheta = 64;
};

const std::vector<MetricEntry>& metric_registry();
const std::vector<SurfaceEntry>& surface_registry();

/// Lookup by label; throws ConfigError with the list of known labels.
const MetricEntry& find_metric(const std::string& label);
const SurfaceEntry& find_surface(const std::string& label);
bool has_metric(const std::string& label);
bool has_surface(const std::string& label);

}  // namespace nlb
