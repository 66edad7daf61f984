#pragma once

#include "nlb/config.hpp"
#include "nlb/report.hpp"

namespace nlb {

/// Executes the configured suites in their declared order and collects the
/// check results. Grids and operators are built once per scenario from the
/// config (registry defaults fill anything unset). Throws ConfigError for
/// impossible configurations; anything else that escapes is a runtime
/// failure for the caller to map to its exit status.
RunReport run_suites(const ScenarioConfig& cfg);

}  // namespace nlb
