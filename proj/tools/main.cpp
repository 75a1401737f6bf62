// optstop CLI: threshold solving, value curves, sweeps, path simulation and
// the self-verification suite for exponential Levy-type optimal stopping.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "optstop/config.hpp"
#include "optstop/csv.hpp"
#include "optstop/laplace.hpp"
#include "optstop/model.hpp"
#include "optstop/threshold.hpp"
#include "optstop/value.hpp"
#include "optstop/verify.hpp"

namespace {

using nlohmann::json;
using namespace optstop;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  bool json_output = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t paths = 0;
  int grid = 0;
  unsigned threads = 0;
  bool threads_set = false;
};

RunConfig load_config(const CliOptions& opt) {
  RunConfig cfg = RunConfig::from_file(opt.config_path);
  if (opt.seed_set) cfg.seed = opt.seed;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.paths > 0) {
    cfg.n_paths = opt.paths;
    cfg.sweep_paths = opt.paths;
    cfg.value_paths = opt.paths;
    cfg.limits.paths_per_level = opt.paths;
  }
  if (opt.grid > 0) {
    cfg.sweep_grid = opt.grid;
    cfg.value_points = opt.grid;
  }
  if (opt.threads_set) cfg.threads = opt.threads;
  cfg.limits.threads = cfg.threads;
  return cfg;
}

SolveConfig solve_config(const RunConfig& cfg) {
  SolveConfig sc;
  sc.limits = cfg.limits;
  sc.convexity_paths = cfg.convexity_paths;
  return sc;
}

// Threshold from the config override or a fresh solve.
double resolve_threshold(const RunConfig& cfg, ThresholdSolution* solution_out = nullptr) {
  if (cfg.threshold > 0.0) return cfg.threshold;
  ThresholdSolution sol = solve(cfg.model, solve_config(cfg), cfg.seed);
  if (solution_out) *solution_out = sol;
  return sol.B_c;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

json solution_to_json(const ThresholdSolution& sol) {
  json j;
  j["B_c"] = sol.B_c;
  j["se_B"] = sol.se_B;
  j["method"] = pasting_method_name(sol.method);
  j["verified"] = sol.verified;
  j["boundary"] = sol.boundary_description();
  j["ratio_limit"] = sol.limits.ratio_limit;
  j["ratio_se"] = sol.limits.se_ratio;
  j["converged"] = sol.limits.converged;
  j["analytic_limits"] = sol.limits.analytic;
  if (sol.method == PastingMethod::SmoothPastingLimit) {
    j["bracket"] = {sol.bracket_lo, sol.bracket_hi};
    j["L_left_deriv"] = sol.limits.L_left_deriv;
    j["G_left_deriv"] = sol.limits.G_left_deriv;
    j["convexity_passed"] = sol.convexity.passed;
    j["convexity_min_z"] = sol.convexity.min_z;
  } else {
    j["L_left_limit"] = sol.limits.L_left_limit;
    j["G_left_limit"] = sol.limits.G_left_limit;
  }
  return j;
}

void print_solution(const ThresholdSolution& sol) {
  std::printf("B_c = %.6f\n", sol.B_c);
  std::printf("se_B = %.2e\n", sol.se_B);
  std::printf("method = %s\n", pasting_method_name(sol.method));
  std::printf("verified = %s\n", sol.verified ? "true" : "false");
  std::printf("boundary = %s\n", sol.boundary_description().c_str());
  if (sol.method == PastingMethod::SmoothPastingLimit) {
    std::printf("bracket = [%.6f, %.6f)\n", sol.bracket_lo, sol.bracket_hi);
    std::printf("L_left_deriv = %.6f\nG_left_deriv = %.6f\n", sol.limits.L_left_deriv,
                sol.limits.G_left_deriv);
    std::printf("convexity = %s (min z %g)\n", sol.convexity.passed ? "pass" : "FAIL",
                sol.convexity.min_z);
  } else {
    std::printf("L_left_limit = %.6f\nG_left_limit = %.6f\n", sol.limits.L_left_limit,
                sol.limits.G_left_limit);
  }
  std::printf("limits = %s (ratio %.6f, se %.2e)\n",
              sol.limits.analytic ? "analytic" : "monte-carlo", sol.limits.ratio_limit,
              sol.limits.se_ratio);
}

int cmd_check(const RunConfig& cfg) {
  const AssumptionReport rep = check_assumptions(cfg.model);
  std::printf("%s\n", rep.summary().c_str());
  if (!rep.admissible()) {
    std::fprintf(stderr, "assumption %s failed\n", rep.first_failure().c_str());
    return 3;
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, bool as_json) {
  ThresholdSolution sol = solve(cfg.model, solve_config(cfg), cfg.seed);
  if (as_json) {
    json j = solution_to_json(sol);
    j["config_hash"] = CsvBuilder::count(cfg.config_hash());
    j["seed"] = cfg.seed;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    print_solution(sol);
  }
  return 0;
}

int cmd_value(const RunConfig& cfg, bool as_json) {
  ThresholdSolution sol;
  const double b = resolve_threshold(cfg, &sol);
  const double lo = cfg.value_v_min > 0.0 ? cfg.value_v_min : b / 4.0;
  const double hi = cfg.value_v_max > 0.0 ? cfg.value_v_max : 8.0 * cfg.model.c;
  McConfig mc;
  mc.n_paths = cfg.value_paths;
  mc.horizon = cfg.horizon;
  mc.seed = cfg.seed;
  mc.threads = cfg.threads;
  const ValueCurve curve =
      value_curve(cfg.model, b, geometric_grid(lo, hi, cfg.value_points), mc);

  CsvBuilder csv("value", cfg.config_hash(), cfg.seed, {"v", "value", "se", "branch"});
  for (const auto& p : curve.points)
    csv.row({CsvBuilder::num(p.v), CsvBuilder::num(p.value), CsvBuilder::num(p.se),
             p.stopped ? "stop" : "cont"});
  const std::string path = out_path(cfg, "value.csv");
  write_text_file(path, csv.str());
  if (as_json) {
    json j;
    j["threshold"] = b;
    j["remark_mode"] = curve.remark_mode;
    j["points"] = json::array();
    for (const auto& p : curve.points)
      j["points"].push_back(
          {{"v", p.v}, {"value", p.value}, {"se", p.se}, {"branch", p.stopped ? "stop" : "cont"}});
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("threshold = %.6f\nwrote %s (%d points)\n", b, path.c_str(),
                cfg.value_points);
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, bool as_json) {
  const double v = cfg.sweep_v > 0.0 ? cfg.sweep_v : cfg.model.c;
  const SweepResult sweep =
      sweep_thresholds(cfg.model, v, cfg.sweep_grid, cfg.sweep_paths, cfg.seed, cfg.threads);
  CsvBuilder csv("sweep", cfg.config_hash(), cfg.seed, {"b", "value", "se"});
  for (std::size_t i = 0; i < sweep.b_grid.size(); ++i)
    csv.row({CsvBuilder::num(sweep.b_grid[i]), CsvBuilder::num(sweep.values[i]),
             CsvBuilder::num(sweep.ses[i])});
  const std::string path = out_path(cfg, "sweep.csv");
  write_text_file(path, csv.str());
  if (as_json) {
    json j;
    j["v"] = v;
    j["argmax_b"] = sweep.argmax_b;
    j["plateau"] = {sweep.plateau_lo, sweep.plateau_hi};
    j["csv"] = path;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("v = %.6f\nargmax_b = %.6f\nplateau = [%.6f, %.6f]\nwrote %s\n", v,
                sweep.argmax_b, sweep.plateau_lo, sweep.plateau_hi, path.c_str());
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg, bool as_json) {
  const double b = resolve_threshold(cfg);
  const double v = cfg.sweep_v > 0.0 ? cfg.sweep_v : cfg.model.c;
  const auto samples = realization_samples(cfg.model, b, v, cfg.n_paths, cfg.sim_dt, cfg.seed);
  CsvBuilder csv("simulate", cfg.config_hash(), cfg.seed, {"hit", "tau", "v_tau", "payoff"});
  double mean = 0.0;
  for (const auto& s : samples) {
    csv.row({s.hit ? "1" : "0", CsvBuilder::num(s.tau), CsvBuilder::num(s.v_at_tau),
             CsvBuilder::num(s.payoff)});
    mean += s.payoff;
  }
  mean /= static_cast<double>(samples.size());
  const std::string path = out_path(cfg, "simulate.csv");
  write_text_file(path, csv.str());
  if (as_json) {
    json j;
    j["threshold"] = b;
    j["v"] = v;
    j["mean_payoff"] = mean;
    j["n_paths"] = samples.size();
    j["csv"] = path;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("threshold = %.6f\nv = %.6f\nmean_payoff = %.6f\nwrote %s (%zu rows)\n", b, v,
                mean, path.c_str(), samples.size());
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyConfig vc;
  vc.solve = solve_config(cfg);
  vc.sweep_grid = cfg.sweep_grid;
  vc.sweep_paths = cfg.sweep_paths;
  vc.value_points = cfg.value_points;
  vc.value_paths = cfg.value_paths;
  vc.realization_paths = cfg.n_paths;
  vc.realization_dt = cfg.sim_dt;
  vc.threads = cfg.threads;
  const VerificationOutcome outcome = run_full_verification(cfg.model, vc, cfg.seed);

  {
    CsvBuilder csv("verify-sweep", cfg.config_hash(), cfg.seed, {"b", "value", "se"});
    for (std::size_t i = 0; i < outcome.sweep.b_grid.size(); ++i)
      csv.row({CsvBuilder::num(outcome.sweep.b_grid[i]), CsvBuilder::num(outcome.sweep.values[i]),
               CsvBuilder::num(outcome.sweep.ses[i])});
    write_text_file(out_path(cfg, "verify_sweep.csv"), csv.str());
  }
  {
    CsvBuilder csv("verify-value", cfg.config_hash(), cfg.seed, {"v", "value", "se", "branch"});
    for (const auto& p : outcome.curve.points)
      csv.row({CsvBuilder::num(p.v), CsvBuilder::num(p.value), CsvBuilder::num(p.se),
               p.stopped ? "stop" : "cont"});
    write_text_file(out_path(cfg, "verify_value.csv"), csv.str());
  }

  std::string failed;
  for (const auto& check : outcome.checks) {
    std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                check.detail.c_str());
    if (!check.passed && failed.empty()) failed = check.name;
  }
  if (!outcome.all_passed) {
    std::fprintf(stderr, "verification failed: %s\n", failed.c_str());
    return 1;
  }
  std::printf("all checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal stopping thresholds for exponential Levy-type models"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "model/run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "master seed (overrides config)")
      ->each([&](const std::string&) { opt.seed_set = true; });
  app.add_option("--out", opt.out_dir, "output directory for CSV artifacts");
  app.add_flag("--json", opt.json_output, "emit machine-readable JSON");
  app.add_option("--paths", opt.paths, "override every Monte Carlo path count");
  app.add_option("--grid", opt.grid, "override sweep/value grid sizes");
  app.add_option("--threads", opt.threads, "worker threads (0 = hardware)")
      ->each([&](const std::string&) { opt.threads_set = true; });

  auto* check = app.add_subcommand("check", "validate the model assumptions");
  auto* solve_cmd = app.add_subcommand("solve", "compute the optimal threshold B_c");
  auto* value = app.add_subcommand("value", "emit the optimal value curve CSV");
  auto* sweep = app.add_subcommand("sweep", "brute-force threshold sweep CSV");
  auto* simulate = app.add_subcommand("simulate", "sample tau*/payoff realizations CSV");
  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  for (auto* sub : {check, solve_cmd, value, sweep, simulate, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig cfg = load_config(opt);
    if (check->parsed()) return cmd_check(cfg);
    require_admissible(cfg.model);
    if (solve_cmd->parsed()) return cmd_solve(cfg, opt.json_output);
    if (value->parsed()) return cmd_value(cfg, opt.json_output);
    if (sweep->parsed()) return cmd_sweep(cfg, opt.json_output);
    if (simulate->parsed()) return cmd_simulate(cfg, opt.json_output);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    if (e.line > 0)
      std::fprintf(stderr, "config error at %s:%d: %s\n", opt.config_path.c_str(), e.line,
                   e.what());
    else
      std::fprintf(stderr, "config error in %s: %s\n", opt.config_path.c_str(), e.what());
    return 2;
  } catch (const AssumptionError& e) {
    std::fprintf(stderr, "assumption %s failed: %s\n", e.assumption.c_str(), e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
