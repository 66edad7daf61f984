#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlb/grid.hpp"

namespace nlb {

/// One verification scenario: a registered manifold, its discretization,
/// the suites to run on it, and output plumbing. Parsed from a flat
/// TOML-style file; every error carries file:line.
struct ScenarioConfig {
  std::string manifold;     // registry label (metric or surface)
  bool is_surface = false;  // resolved against the registry at parse time

  // 1D discretization; zero/negative values mean "registry default".
  std::size_t n_cells = 0;
  double truncation = 0.0;
  bool grading_set = false;
  Grading grading = Grading::coordinate;
  // 2D discretization
  std::size_t n_r = 0;
  std::size_t n_theta = 0;

  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  std::string out_dir = "report";
  bool write_json = true;
  bool write_csv = false;
  // Overrides keyed by check name; consulted by the suite runners.
  std::map<std::string, double> tolerances;
  // Indeterminate verdicts normally fail the run; advisory mode lets them
  // through with a warning status.
  bool advisory_indeterminate = false;
};

/// All suites that exist, in their canonical execution order.
const std::vector<std::string>& known_suites();

/// True when the suite can run on this kind of manifold (some checks are
/// one-dimensional only, density needs the cylinder).
bool suite_supports(const std::string& suite, bool is_surface);

ScenarioConfig parse_config_file(const std::string& path);

/// Parses config text; `origin` names the source in error messages.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::string& origin);

}  // namespace nlb
