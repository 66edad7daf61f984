// Command-line front end: run verification scenarios from a config file,
// classify a registered metric, or list the registry.
//
// Exit codes: 0 all checks passed, 1 at least one check failed,
// 2 configuration error (bad file, bad flags), 3 runtime failure.

#include <complex>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlb/config.hpp"
#include "nlb/error.hpp"
#include "nlb/registry.hpp"
#include "nlb/report.hpp"
#include "nlb/spectral.hpp"
#include "nlb/suites.hpp"

namespace {

int run_verify(const std::string& config_path, const std::string& out_dir,
               const std::string& formats, long long seed) {
  nlb::ScenarioConfig cfg = nlb::parse_config_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (!formats.empty()) {
    cfg.write_json = formats.find("json") != std::string::npos;
    cfg.write_csv = formats.find("csv") != std::string::npos;
    std::string rest = formats;
    for (const char* known : {"json", "csv", ","}) {
      std::size_t pos;
      while ((pos = rest.find(known)) != std::string::npos)
        rest.erase(pos, std::string(known).size());
    }
    if (!rest.empty())
      throw nlb::ConfigError("--format: unknown format in '" + formats +
                             "' (known: json, csv)");
  }

  const nlb::RunReport report = nlb::run_suites(cfg);
  for (const auto& c : report.checks) {
    const char* tag = c.status == "pass"      ? "pass"
                      : c.status == "advisory" ? "ADVISORY"
                                                : "FAIL";
    std::printf("[%s] %s/%s  observed=%.6g tolerance=%.6g\n", tag,
                c.suite.c_str(), c.name.c_str(), c.observed, c.tolerance);
  }
  const auto written = nlb::write_reports(report, cfg.out_dir);
  std::size_t failed = 0;
  for (const auto& c : report.checks)
    if (c.status == "fail") ++failed;
  std::printf("%zu/%zu checks passed", report.checks.size() - failed,
              report.checks.size());
  if (!written.empty())
    std::printf("; wrote %s/%s", cfg.out_dir.c_str(), written.front().c_str());
  std::printf("\n");
  return report.all_pass() ? 0 : 1;
}

int run_classify(const std::string& label, const std::string& lambda_str) {
  const nlb::MetricEntry& entry = nlb::find_metric(label);
  const nlb::DeficiencyReport rep = nlb::deficiency_indices(entry.metric);
  std::printf("metric: %s (%s)\n", label.c_str(), entry.description.c_str());
  std::printf("ends: %s, %s\n", nlb::to_string(rep.ends[0]),
              nlb::to_string(rep.ends[1]));
  std::printf("deficiency indices: (%d, %d)\n", rep.n_plus, rep.n_minus);
  std::printf("essentially self-adjoint: %s%s\n",
              rep.essentially_selfadjoint ? "yes" : "no",
              rep.decided ? "" : " (indeterminate)");
  std::printf("completeness: %s (%s)\n", rep.completeness.verdict.c_str(),
              rep.completeness.evidence.c_str());
  std::printf("%s\n", rep.rationale.c_str());

  if (!lambda_str.empty()) {
    if (!entry.metric.has_open_end())
      throw nlb::ConfigError(
          "--lambda: metric '" + label +
          "' is compact; there is no open end to classify");
    double re = 0.0, im = 0.0;
    if (std::sscanf(lambda_str.c_str(), "%lf,%lf", &re, &im) != 2)
      throw nlb::ConfigError("--lambda: expected 're,im', got '" +
                             lambda_str + "'");
    const nlb::WeylReport wr =
        nlb::weyl_classify(entry.metric, std::complex<double>(re, im));
    std::printf("weyl at lambda = %g%+gi: %s\n", re, im,
                nlb::to_string(wr.verdict));
    std::printf("  %s\n", wr.evidence.c_str());
  }
  return 0;
}

int run_list() {
  std::printf("metrics:\n");
  for (const auto& e : nlb::metric_registry())
    std::printf(
        "  %-14s %s\n                 complete=%s esa=%s  [%s]\n",
        e.metric.label.c_str(), e.description.c_str(),
        e.expected_complete ? "yes" : "no", e.expected_esa ? "yes" : "no",
        e.basis.c_str());
  std::printf("surfaces:\n");
  for (const auto& e : nlb::surface_registry())
    std::printf("  %-14s %s\n                 [%s]\n",
                e.surface.label.c_str(), e.description.c_str(),
                e.basis.c_str());
  std::printf(
      "suites: distance, completeness, spectral, davies_gaffney, "
      "finite_speed, cutoffs, density, interpolation, leibniz, "
      "boundary_flux\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neumann Laplacian verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, formats, metric_label, lambda_str;
  long long seed = -1;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the suites from a scenario config and write a report");
  verify->add_option("config,--config", config_path, "scenario config file")
      ->required();
  verify->add_option("--out", out_dir, "output directory (overrides config)");
  verify->add_option("--format", formats,
                     "comma list of json,csv (overrides config)");
  verify->add_option("--seed", seed, "random seed (overrides config)");

  CLI::App* classify = app.add_subcommand(
      "classify", "deficiency indices and completeness of one metric");
  classify->add_option("metric,--metric", metric_label, "registered metric label")
      ->required();
  classify->add_option("--lambda", lambda_str,
                       "extra Weyl run at lambda = 're,im'");

  app.add_subcommand("list", "print the registered manifolds and suites");

  try {
    app.parse(argc, argv);
    if (verify->parsed()) return run_verify(config_path, out_dir, formats, seed);
    if (classify->parsed()) return run_classify(metric_label, lambda_str);
    return run_list();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  } catch (const nlb::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
}
