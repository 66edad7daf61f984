#include "nlb/report.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "nlb/error.hpp"

namespace nlb {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string grading_name(Grading g) {
  return g == Grading::arclength ? "arclength" : "coordinate";
}

ordered_json config_echo(const ScenarioConfig& c) {
  ordered_json j;
  j["manifold"] = c.manifold;
  j["kind"] = c.is_surface ? "surface" : "metric";
  if (c.is_surface) {
    j["n_r"] = c.n_r;
    j["n_theta"] = c.n_theta;
  } else {
    j["n_cells"] = c.n_cells;
    j["truncation"] = c.truncation;
    j["grading"] = grading_name(c.grading);
  }
  j["suites"] = c.suites;
  j["seed"] = c.seed;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;  // std::map: sorted
  j["tolerances"] = tol;
  j["advisory_indeterminate"] = c.advisory_indeterminate;
  return j;
}

}  // namespace

bool RunReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.passed()) return false;
  return true;
}

std::string report_json(const RunReport& report) {
  ordered_json j;
  j["version"] = "1.0";
  j["config"] = config_echo(report.config);
  j["all_pass"] = report.all_pass();
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : report.checks) {
    ordered_json e;
    e["suite"] = c.suite;
    e["name"] = c.name;
    e["status"] = c.status;
    e["observed"] = c.observed;
    e["bound"] = c.bound;
    e["tolerance"] = c.tolerance;
    e["claim"] = c.claim;
    if (!c.trace_rows.empty()) e["trace"] = c.name + ".csv";
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::vector<std::string> write_reports(const RunReport& report,
                                       const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir +
                                   "': " + ec.message());
  std::vector<std::string> written;

  if (report.config.write_json) {
    const fs::path path = fs::path(dir) / "report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << report_json(report);
    written.push_back("report.json");
  }
  if (report.config.write_csv) {
    for (const CheckResult& c : report.checks) {
      if (c.trace_rows.empty()) continue;
      const std::string fname = c.name + ".csv";
      const fs::path path = fs::path(dir) / fname;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      for (std::size_t k = 0; k < c.trace_columns.size(); ++k)
        out << (k ? "," : "") << c.trace_columns[k];
      out << "\n";
      ordered_json num;  // reuse the JSON float printer: shortest round-trip
      for (const auto& row : c.trace_rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
          num = row[k];
          out << (k ? "," : "") << num.dump();
        }
        out << "\n";
      }
      written.push_back(fname);
    }
  }
  return written;
}

}  // namespace nlb
