#include "optstop/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace optstop {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_number(const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(line, "expected a number, got '" + value + "'");
  return x;
}

std::uint64_t parse_count(const std::string& value, int line) {
  const double x = parse_number(value, line);
  if (x < 0.0 || x != std::floor(x) || x > 1.8e19)
    throw ConfigError(line, "expected a nonnegative integer, got '" + value + "'");
  return static_cast<std::uint64_t>(x);
}

std::string format_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file: " + path);

  RunConfig cfg;
  bool family_seen = false;
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // table headers are cosmetic

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected 'key = value', got '" + trim(raw_line) + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty())
      throw ConfigError(line_no, "expected 'key = value', got '" + trim(raw_line) + "'");

    if (key == "family") {
      try {
        cfg.model.family = family_from_name(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line_no, e.what());
      }
      family_seen = true;
    } else if (key == "mu") {
      cfg.model.mu = parse_number(value, line_no);
    } else if (key == "sigma") {
      cfg.model.sigma = parse_number(value, line_no);
    } else if (key == "lambda_down") {
      cfg.model.lambda_down = parse_number(value, line_no);
    } else if (key == "eta_down") {
      cfg.model.eta_down = parse_number(value, line_no);
    } else if (key == "lambda_up") {
      cfg.model.lambda_up = parse_number(value, line_no);
    } else if (key == "eta_up") {
      cfg.model.eta_up = parse_number(value, line_no);
    } else if (key == "r") {
      cfg.model.r = parse_number(value, line_no);
    } else if (key == "m") {
      cfg.model.m = parse_number(value, line_no);
    } else if (key == "c") {
      cfg.model.c = parse_number(value, line_no);
    } else if (key == "ladder_start") {
      cfg.limits.ladder_start = parse_number(value, line_no);
    } else if (key == "ladder_levels") {
      cfg.limits.ladder_levels = static_cast<int>(parse_count(value, line_no));
    } else if (key == "paths_per_level") {
      cfg.limits.paths_per_level = parse_count(value, line_no);
    } else if (key == "rel_tol") {
      cfg.limits.rel_tol = parse_number(value, line_no);
    } else if (key == "sweep_grid") {
      cfg.sweep_grid = static_cast<int>(parse_count(value, line_no));
    } else if (key == "sweep_paths") {
      cfg.sweep_paths = parse_count(value, line_no);
    } else if (key == "sweep_v") {
      cfg.sweep_v = parse_number(value, line_no);
    } else if (key == "value_points") {
      cfg.value_points = static_cast<int>(parse_count(value, line_no));
    } else if (key == "value_v_min") {
      cfg.value_v_min = parse_number(value, line_no);
    } else if (key == "value_v_max") {
      cfg.value_v_max = parse_number(value, line_no);
    } else if (key == "value_paths") {
      cfg.value_paths = parse_count(value, line_no);
    } else if (key == "n_paths") {
      cfg.n_paths = parse_count(value, line_no);
    } else if (key == "sim_dt") {
      cfg.sim_dt = parse_number(value, line_no);
    } else if (key == "horizon") {
      cfg.horizon = parse_number(value, line_no);
    } else if (key == "threshold") {
      cfg.threshold = parse_number(value, line_no);
    } else if (key == "convexity_paths") {
      cfg.convexity_paths = parse_count(value, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_count(value, line_no);
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(parse_count(value, line_no));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  if (!family_seen) throw ConfigError(0, "config is missing the 'family' key");

  cfg.limits.horizon = cfg.horizon;
  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "family = " << family_name(model.family) << "\n"
     << "mu = " << format_num(model.mu) << "\n"
     << "sigma = " << format_num(model.sigma) << "\n"
     << "lambda_down = " << format_num(model.lambda_down) << "\n"
     << "eta_down = " << format_num(model.eta_down) << "\n"
     << "lambda_up = " << format_num(model.lambda_up) << "\n"
     << "eta_up = " << format_num(model.eta_up) << "\n"
     << "r = " << format_num(model.r) << "\n"
     << "m = " << format_num(model.m) << "\n"
     << "c = " << format_num(model.c) << "\n"
     << "ladder_start = " << format_num(limits.ladder_start) << "\n"
     << "ladder_levels = " << limits.ladder_levels << "\n"
     << "paths_per_level = " << limits.paths_per_level << "\n"
     << "rel_tol = " << format_num(limits.rel_tol) << "\n"
     << "sweep_grid = " << sweep_grid << "\n"
     << "sweep_paths = " << sweep_paths << "\n"
     << "sweep_v = " << format_num(sweep_v) << "\n"
     << "value_points = " << value_points << "\n"
     << "value_v_min = " << format_num(value_v_min) << "\n"
     << "value_v_max = " << format_num(value_v_max) << "\n"
     << "value_paths = " << value_paths << "\n"
     << "n_paths = " << n_paths << "\n"
     << "sim_dt = " << format_num(sim_dt) << "\n"
     << "horizon = " << format_num(horizon) << "\n"
     << "threshold = " << format_num(threshold) << "\n"
     << "convexity_paths = " << convexity_paths << "\n"
     << "seed = " << seed << "\n";
  return os.str();
}

std::uint64_t RunConfig::config_hash() const { return fnv1a64(canonical()); }

}  // namespace optstop
