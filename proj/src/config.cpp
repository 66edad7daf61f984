#include "nlb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "nlb/error.hpp"
#include "nlb/registry.hpp"

namespace nlb {
namespace {

const std::vector<std::string> kSuites = {
    "distance",  "completeness",  "spectral", "davies_gaffney",
    "finite_speed", "cutoffs",    "density",  "interpolation",
    "leibniz",   "boundary_flux"};

// Suites that need a 1D metric (ODE shooting, tridiagonal spectra, ...).
const std::vector<std::string> kOneDimOnly = {
    "completeness", "spectral",      "davies_gaffney", "finite_speed",
    "interpolation", "leibniz",      "boundary_flux"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  std::string origin;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    if (line_no <= 0) throw ConfigError(origin + ": " + msg);
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  double number(const std::string& v) const {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) fail("trailing characters after number '" + v + "'");
      return x;
    } catch (const std::invalid_argument&) {
      fail("expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range: '" + v + "'");
    }
  }

  std::string string_value(const std::string& v) const {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
      fail("expected a quoted string, got '" + v + "'");
    return v.substr(1, v.size() - 2);
  }

  bool boolean(const std::string& v) const {
    if (v == "true") return true;
    if (v == "false") return false;
    fail("expected true/false, got '" + v + "'");
  }

  std::vector<std::string> string_array(const std::string& v) const {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      fail("expected an array [\"...\"], got '" + v + "'");
    std::vector<std::string> out;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail("empty array element");
      out.push_back(string_value(item));
    }
    return out;
  }
};

}  // namespace

const std::vector<std::string>& known_suites() { return kSuites; }

bool suite_supports(const std::string& suite, bool is_surface) {
  if (suite == "density") return is_surface;
  if (std::find(kOneDimOnly.begin(), kOneDimOnly.end(), suite) !=
      kOneDimOnly.end())
    return !is_surface;
  return true;  // distance and cutoffs run on both kinds
}

ScenarioConfig parse_config_text(const std::string& text,
                                 const std::string& origin) {
  ScenarioConfig cfg;
  Parser p{origin, 0};
  std::string section;
  bool manifold_seen = false;
  bool suites_seen = false;
  int suites_line = 0;

  std::stringstream ss(text);
  std::string raw;
  while (std::getline(ss, raw)) {
    ++p.line_no;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "manifold" && section != "grid" && section != "run" &&
          section != "tolerances")
        p.fail("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) p.fail("expected key = value");

    // arrays may continue over following lines until the closing bracket
    while (val.front() == '[' && val.back() != ']') {
      if (!std::getline(ss, raw)) p.fail("unterminated array");
      ++p.line_no;
      std::string more = trim(raw);
      const auto h2 = more.find('#');
      if (h2 != std::string::npos) more = trim(more.substr(0, h2));
      if (more.empty()) continue;
      val += " " + more;
    }

    if (section == "manifold") {
      if (key == "label") {
        cfg.manifold = p.string_value(val);
        if (has_metric(cfg.manifold)) {
          cfg.is_surface = false;
        } else if (has_surface(cfg.manifold)) {
          cfg.is_surface = true;
        } else {
          p.fail("unknown manifold label '" + cfg.manifold + "'");
        }
        manifold_seen = true;
      } else {
        p.fail("unknown key '" + key + "' in [manifold]");
      }
    } else if (section == "grid") {
      if (key == "n_cells") {
        const double x = p.number(val);
        if (x < 8 || x != std::floor(x)) p.fail("n_cells must be an integer >= 8");
        cfg.n_cells = static_cast<std::size_t>(x);
      } else if (key == "truncation") {
        cfg.truncation = p.number(val);
        if (!(cfg.truncation > 0)) p.fail("truncation must be positive");
      } else if (key == "grading") {
        const std::string g = p.string_value(val);
        if (g == "coordinate") cfg.grading = Grading::coordinate;
        else if (g == "arclength") cfg.grading = Grading::arclength;
        else p.fail("grading must be \"coordinate\" or \"arclength\"");
        cfg.grading_set = true;
      } else if (key == "n_r") {
        const double x = p.number(val);
        if (x < 8 || x != std::floor(x)) p.fail("n_r must be an integer >= 8");
        cfg.n_r = static_cast<std::size_t>(x);
      } else if (key == "n_theta") {
        const double x = p.number(val);
        if (x < 8 || x != std::floor(x)) p.fail("n_theta must be an integer >= 8");
        cfg.n_theta = static_cast<std::size_t>(x);
      } else {
        p.fail("unknown key '" + key + "' in [grid]");
      }
    } else if (section == "run") {
      if (key == "suites") {
        cfg.suites = p.string_array(val);
        if (cfg.suites.empty()) p.fail("suites list must not be empty");
        for (const std::string& s : cfg.suites)
          if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
            p.fail("unknown suite '" + s + "'");
        suites_seen = true;
        suites_line = p.line_no;
      } else if (key == "seed") {
        const double x = p.number(val);
        if (x < 0 || x != std::floor(x)) p.fail("seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(x);
      } else if (key == "out") {
        cfg.out_dir = p.string_value(val);
      } else if (key == "formats") {
        cfg.write_json = cfg.write_csv = false;
        for (const std::string& f : p.string_array(val)) {
          if (f == "json") cfg.write_json = true;
          else if (f == "csv") cfg.write_csv = true;
          else p.fail("unknown format '" + f + "' (json, csv)");
        }
      } else if (key == "advisory_indeterminate") {
        cfg.advisory_indeterminate = p.boolean(val);
      } else {
        p.fail("unknown key '" + key + "' in [run]");
      }
    } else if (section == "tolerances") {
      cfg.tolerances[key] = p.number(val);
    } else {
      p.fail("key outside any section");
    }
  }

  p.line_no = 0;
  if (!manifold_seen) p.fail("missing [manifold] label");
  if (!suites_seen || cfg.suites.empty()) p.fail("missing or empty suites list");
  p.line_no = suites_line;
  for (const std::string& s : cfg.suites)
    if (!suite_supports(s, cfg.is_surface))
      p.fail("suite '" + s + "' is not available on " +
             (cfg.is_surface ? "a surface" : "a 1D metric") + " ('" +
             cfg.manifold + "')");
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace nlb
