#pragma once

#include <string>
#include <vector>

#include "nlb/config.hpp"

namespace nlb {

/// One verified statement. `claim` is the mathematical assertion checked,
/// written out in full so the report stands on its own; observed vs bound
/// at the given tolerance is what decided the status.
struct CheckResult {
  std::string suite;
  std::string name;
  std::string status;  // "pass", "fail", or "advisory"
  double observed = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string claim;

  // Optional per-sample trace for the CSV sidecar.
  std::vector<std::string> trace_columns;
  std::vector<std::vector<double>> trace_rows;

  bool passed() const { return status != "fail"; }
};

struct RunReport {
  ScenarioConfig config;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

/// Serializes the report deterministically: same config + seed gives a
/// byte-identical report.json (no timestamps, no absolute paths, fixed key
/// order, shortest-round-trip numbers). CSV traces land next to it, one
/// file per check that carries a trace.
std::string report_json(const RunReport& report);

/// Writes report.json and the CSV traces into `dir` (created if needed)
/// honoring the config's format flags. Returns the paths written, relative
/// to `dir`.
std::vector<std::string> write_reports(const RunReport& report,
                                       const std::string& dir);

}  // namespace nlb
