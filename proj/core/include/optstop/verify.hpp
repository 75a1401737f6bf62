#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "optstop/model.hpp"
#include "optstop/threshold.hpp"
#include "optstop/value.hpp"

namespace optstop {

// Brute-force witness for the threshold form of the optimal rule: mc_value
// swept over a uniform b-grid with common random numbers across b.
struct SweepResult {
  std::vector<double> b_grid;
  std::vector<double> values;
  std::vector<double> ses;
  double v = 0.0;
  double argmax_b = 0.0;
  std::size_t argmax_index = 0;
  double plateau_lo = 0.0;  // envelope of b whose value is within 3 joint se
  double plateau_hi = 0.0;  // of the maximum
  bool in_plateau(double b) const { return b >= plateau_lo && b <= plateau_hi; }
  double grid_step() const { return b_grid.size() > 1 ? b_grid[1] - b_grid[0] : 0.0; }
};

SweepResult sweep_thresholds(const ModelSpec& model, double v, int grid_size,
                             std::uint64_t n_paths, std::uint64_t seed, unsigned threads = 0);

// Pointwise evaluator of the optimal value, (value, se) at v.
using ValueFn = std::function<ValuePoint(double)>;

// Analytic evaluator for BrownianDrift; interpolated representation-backed
// curve (exact on the stopping branch) for the jump families. `v_hi` bounds
// the interpolation range; queries beyond are clamped.
ValueFn make_value_evaluator(const ModelSpec& model, double threshold, double v_hi,
                             const McConfig& cfg);

// One-step Snell check: E_v[e^{-q h} s(nu_h)] <= s(v) within noise for every
// start, with near-equality while the step stays in the continuation region.
struct OneStepRow {
  double v = 0.0;
  double s_v = 0.0;
  double s_v_se = 0.0;
  double lhs = 0.0;
  double lhs_se = 0.0;
  double deficit = 0.0;  // s(v) - lhs
  double joint_se = 0.0;
  bool inequality_ok = false;
};

struct OneStepReport {
  std::vector<OneStepRow> rows;
  double h = 0.0;
  bool all_ok = true;
};

OneStepReport supermartingale_check(const ModelSpec& model, const ValueFn& s_eval,
                                    std::span<const double> starts, double h,
                                    std::uint64_t n_paths, std::uint64_t seed,
                                    unsigned threads = 0);

// Simulates the original process V against the growing boundary B e^{mt} on a
// time grid with bridge crossing correction, and averages the original-scale
// payoff e^{-r tau} (-V_tau + c e^{m tau}). Closes the loop between the
// original problem and the drift-adjusted reformulation.
struct RealizationStats {
  double mean_payoff = 0.0;
  double se = 0.0;
  double hit_fraction = 0.0;
  std::uint64_t n_paths = 0;
  // largest pathwise gap between the original-scale payoff and the
  // drift-adjusted form e^{-q tau}(c - nu_tau); a pure rounding check
  double max_formulation_gap = 0.0;
};

RealizationStats stopping_time_realization(const ModelSpec& model, double threshold, double v,
                                           std::uint64_t n_paths, double dt, std::uint64_t seed,
                                           unsigned threads = 0);

struct RealizationSample {
  bool hit = false;
  double tau = 0.0;
  double v_at_tau = 0.0;
  double payoff = 0.0;
};

// Per-path samples in path order (CSV emission; deterministic byte-for-byte).
std::vector<RealizationSample> realization_samples(const ModelSpec& model, double threshold,
                                                   double v, std::uint64_t n_paths, double dt,
                                                   std::uint64_t seed);

// The full verification suite run by the `verify` CLI command.
struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  SolveConfig solve;
  int sweep_grid = 49;
  std::uint64_t sweep_paths = 50'000;
  std::vector<double> sweep_v_multipliers = {0.5, 1.0, 2.0, 4.0};
  int value_points = 64;
  std::uint64_t value_paths = 100'000;
  std::uint64_t realization_paths = 20'000;
  double realization_dt = 0.02;
  std::uint64_t onestep_paths = 100'000;
  double onestep_h = 0.1;
  unsigned threads = 0;
};

struct VerificationOutcome {
  ThresholdSolution solution;
  SweepResult sweep;   // the sweep at v = c (written to CSV by the CLI)
  ValueCurve curve;
  std::vector<CheckLine> checks;
  bool all_passed = true;
};

VerificationOutcome run_full_verification(const ModelSpec& model, const VerifyConfig& cfg,
                                          std::uint64_t seed);

}  // namespace optstop
