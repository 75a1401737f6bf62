#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optstop/model.hpp"
#include "optstop/stats.hpp"

namespace optstop {

// Size/seed bundle for a single Monte Carlo estimate. horizon == 0 picks the
// automatic truncation horizon for the model's effective discount.
struct McConfig {
  std::uint64_t n_paths = 100'000;
  double horizon = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

enum class EstimateSource { Analytic, MonteCarlo };

// Point estimates of L(x) = E[e^{-q tau_x}] and
// G(x) = E[e^{-q tau_x + Xbar_{tau_x}}], q = r - m.
struct LaplaceEstimate {
  double x = 0.0;
  double L_hat = 0.0;
  double G_hat = 0.0;
  double se_L = 0.0;
  double se_G = 0.0;
  double cov_LG = 0.0;
  std::uint64_t n_paths = 0;
  double horizon = 0.0;
  EstimateSource source = EstimateSource::Analytic;
};

// Positive root gamma = (mu_bar + sqrt(mu_bar^2 + 2 q sigma^2)) / sigma^2 of
// the drifted-Brownian passage identity E e^{-q tau_x} = e^{gamma x}.
double brownian_gamma(const ModelSpec& model);

// Closed form for the continuous case: L(x) = e^{gamma x},
// G(x) = e^{(gamma+1) x}. Wrong family -> std::domain_error.
LaplaceEstimate analytic_pair_brownian(const ModelSpec& model, double x);

// Monte Carlo estimate of the pair at a level x < 0. Identical seeds couple
// the paths across calls (common random numbers); independent estimates need
// distinct seeds.
LaplaceEstimate mc_pair(const ModelSpec& model, double x, const McConfig& cfg);

// Analytic where available, Monte Carlo otherwise.
LaplaceEstimate transform_pair(const ModelSpec& model, double x, const McConfig& cfg);

struct LimitConfig {
  double ladder_start = 0.1;
  int ladder_levels = 8;
  std::uint64_t paths_per_level = 1'000'000;
  double rel_tol = 1e-3;
  double horizon = 0.0;
  unsigned threads = 0;
  bool force_monte_carlo = false;  // bypass analytic shortcuts (cross-checks)
};

// One-sided limits at x = 0- extrapolated from a geometric level ladder with
// common random numbers. In the continuous case the left limits are 1 exactly
// and the derivatives are populated instead.
struct LeftLimitEstimate {
  double ratio_limit = 0.0;    // lim (1 - L(x)) / (1 - G(x))
  double L_left_limit = 1.0;   // L(0-)
  double G_left_limit = 1.0;   // G(0-)
  double L_left_deriv = 0.0;   // L'(0-), continuous case only
  double G_left_deriv = 0.0;   // G'(0-), continuous case only
  double se_ratio = 0.0;
  double se_L_limit = 0.0;
  double se_G_limit = 0.0;
  double se_L_deriv = 0.0;
  double se_G_deriv = 0.0;
  bool continuous_at_zero = true;
  bool converged = false;
  bool analytic = false;
  std::vector<double> levels_used;
  std::vector<LaplaceEstimate> ladder;    // per-level diagnostics
  std::vector<double> ratio_extrapolants; // Richardson diagonal of the ratio
};

LeftLimitEstimate left_limits(const ModelSpec& model, const LimitConfig& cfg,
                              std::uint64_t seed);

// Richardson/Neville extrapolation of y(x) to x -> 0 on a decreasing-|x|
// ladder. The tableau depth is capped (noise amplification grows per column)
// and the returned value is the diagonal entry where successive extrapolants
// stall: with Monte Carlo input the deepest levels can be noise-dominated and
// must not outvote the stable prefix.
struct Extrapolation {
  double value = 0.0;
  bool converged = false;
  std::size_t chosen_index = 0;
  std::vector<double> diagonal;
};

Extrapolation richardson_limit(std::span<const double> x, std::span<const double> y,
                               double rel_tol, int max_cols = 3);

}  // namespace optstop
