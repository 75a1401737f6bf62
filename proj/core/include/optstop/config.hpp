#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "optstop/laplace.hpp"
#include "optstop/model.hpp"

namespace optstop {

struct ConfigError : std::runtime_error {
  int line;  // 0 when not tied to a specific line
  ConfigError(int line_no, const std::string& msg)
      : std::runtime_error(msg), line(line_no) {}
};

// Everything a CLI run needs: model, estimation sizes, grids, seed, outputs.
// Read from a flat TOML-style key = value file.
struct RunConfig {
  ModelSpec model;
  LimitConfig limits;

  int sweep_grid = 97;
  std::uint64_t sweep_paths = 100'000;
  double sweep_v = 0.0;  // 0 -> c

  int value_points = 64;
  double value_v_min = 0.0;  // 0 -> B_c / 4
  double value_v_max = 0.0;  // 0 -> 8 c
  std::uint64_t value_paths = 100'000;

  std::uint64_t n_paths = 100'000;  // simulate / generic Monte Carlo
  double sim_dt = 0.01;
  double horizon = 0.0;  // 0 -> automatic
  double threshold = 0.0;  // 0 -> solve for B_c

  std::uint64_t convexity_paths = 20'000;

  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir = ".";

  static RunConfig from_file(const std::string& path);

  // Canonical key = value rendering of the effective configuration; hashed
  // into every output file header.
  std::string canonical() const;
  std::uint64_t config_hash() const;
};

std::uint64_t fnv1a64(const std::string& text);

}  // namespace optstop
