#include "optstop/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optstop/first_passage.hpp"
#include "optstop/rng.hpp"

namespace optstop {

const char* pasting_method_name(PastingMethod m) {
  switch (m) {
    case PastingMethod::ContinuousPasting: return "ContinuousPasting";
    case PastingMethod::SmoothPastingLimit: return "SmoothPastingLimit";
  }
  return "?";
}

std::string ThresholdSolution::boundary_description() const {
  std::ostringstream os;
  os << "t -> " << B_c << " * exp(" << growth_rate << " * t)";
  return os.str();
}

double pasting_residual(double L_left, double G_left, double c, double b) {
  return (-b + c) - (-b * G_left + c * L_left);
}

PastingResidual pasting_residual(const ModelSpec& model, double b, const LimitConfig& cfg,
                                 std::uint64_t seed) {
  if (is_downward_regular(model))
    throw std::domain_error(
        "pasting_residual: identically zero in the limit for downward-regular models");
  if (!(b > 0.0) || !(b < model.c))
    throw std::invalid_argument("pasting_residual: b must lie in (0, c)");
  const LeftLimitEstimate lim = left_limits(model, cfg, seed);
  PastingResidual out;
  out.residual = pasting_residual(lim.L_left_limit, lim.G_left_limit, model.c, b);
  out.se = std::sqrt(model.c * model.c * lim.se_L_limit * lim.se_L_limit +
                     b * b * lim.se_G_limit * lim.se_G_limit);
  return out;
}

bool smooth_pasting_inequality_check(double L_deriv, double G_deriv, double se_L_deriv,
                                     double se_G_deriv, double c, double B, double* slack,
                                     double* tol) {
  const double s = G_deriv - (c / B) * L_deriv;
  const double se =
      std::sqrt(se_G_deriv * se_G_deriv + (c / B) * (c / B) * se_L_deriv * se_L_deriv);
  const double tolerance = std::max(5.0 * se, 1e-9 * std::max(1.0, G_deriv));
  if (slack) *slack = s;
  if (tol) *tol = tolerance;
  return s >= -tolerance;
}

bool smooth_pasting_inequality_check(const ModelSpec& model, double B, const LimitConfig& cfg,
                                     std::uint64_t seed) {
  if (!is_downward_regular(model))
    throw std::domain_error("smooth_pasting_inequality_check: needs a continuous-case model");
  const LeftLimitEstimate lim = left_limits(model, cfg, seed);
  return smooth_pasting_inequality_check(lim.L_left_deriv, lim.G_left_deriv, lim.se_L_deriv,
                                         lim.se_G_deriv, model.c, B);
}

ConvexityScan convexity_scan(const ModelSpec& model, double b, int n_points, double span,
                             std::uint64_t n_paths, unsigned threads, std::uint64_t seed) {
  if (n_points < 3) throw std::invalid_argument("convexity_scan: need >= 3 points");
  ConvexityScan scan;
  scan.v_grid = geometric_grid(b * std::pow(span, 1.0 / n_points), b * span, n_points);

  if (model.family == Family::BrownianDrift) {
    const double gamma = brownian_gamma(model);
    std::vector<double> s(n_points);
    for (int i = 0; i < n_points; ++i)
      s[i] = (model.c - b) * std::pow(b / scan.v_grid[i], gamma);
    for (int i = 1; i + 1 < n_points; ++i) {
      scan.second_diff.push_back(s[i + 1] - 2.0 * s[i] + s[i - 1]);
      scan.se.push_back(0.0);
    }
    scan.total_curvature = (s[n_points - 1] - s[n_points - 2]) - (s[1] - s[0]);
    scan.total_se = 0.0;
    return scan;
  }

  const double horizon = auto_horizon(model.q(), n_paths);
  const double c = model.c;
  const std::size_t k = static_cast<std::size_t>(n_points);
  // One shared substream per path across the whole grid; second differences
  // then see the strongly coupled noise, not three independent errors.
  PathStats stats =
      run_paths(n_paths, k, threads, [&](std::uint64_t path, std::span<double> out) {
        for (std::size_t i = 0; i < k; ++i) {
          Rng rng = substream(seed, StreamKind::ValueGrid, path);
          const double v = scan.v_grid[i];
          const FirstPassageSample smp =
              simulate_first_passage(model, std::log(b / v), horizon, rng);
          out[i] = smp.hit ? smp.discount_weight * (c - v * std::exp(smp.position)) : 0.0;
        }
      });

  std::vector<double> w(k, 0.0);
  for (std::size_t i = 1; i + 1 < k; ++i) {
    scan.second_diff.push_back(stats.mean[i + 1] - 2.0 * stats.mean[i] + stats.mean[i - 1]);
    std::fill(w.begin(), w.end(), 0.0);
    w[i - 1] = 1.0;
    w[i] = -2.0;
    w[i + 1] = 1.0;
    scan.se.push_back(stats.se_of_combination(w));
  }
  // Telescoped sum of the second differences: slope(end) - slope(start).
  scan.total_curvature = (stats.mean[k - 1] - stats.mean[k - 2]) - (stats.mean[1] - stats.mean[0]);
  std::fill(w.begin(), w.end(), 0.0);
  w[0] = 1.0;
  w[1] = -1.0;
  w[k - 2] = -1.0;
  w[k - 1] = 1.0;
  scan.total_se = stats.se_of_combination(w);
  return scan;
}

ConvexityCheck assess_convexity(const ConvexityScan& scan) {
  ConvexityCheck check;
  check.performed = true;
  check.n_points = static_cast<int>(scan.v_grid.size());
  double min_z = 1e9, max_z = -1e9;
  bool any_negative = false;
  for (std::size_t i = 0; i < scan.second_diff.size(); ++i) {
    const double se = scan.se[i];
    const double z = se > 0.0 ? scan.second_diff[i] / se
                              : (scan.second_diff[i] >= 0.0 ? 1e9 : -1e9);
    min_z = std::min(min_z, z);
    max_z = std::max(max_z, z);
    if (se > 0.0 ? z < -3.0 : scan.second_diff[i] < 0.0) any_negative = true;
  }
  check.min_z = min_z;
  check.max_z = max_z;
  check.total_curvature = scan.total_curvature;
  check.total_se = scan.total_se;
  // Strict convexity: nothing significantly concave, and the total curvature
  // clearly positive.
  check.passed =
      !any_negative && scan.total_curvature > 3.0 * scan.total_se &&
      scan.total_curvature > 0.0;
  return check;
}

ThresholdSolution solve_from_limits(const ModelSpec& model, const LeftLimitEstimate& limits,
                                    const SolveConfig& cfg, std::uint64_t seed) {
  ThresholdSolution sol;
  sol.limits = limits;
  sol.growth_rate = model.m;
  sol.c = model.c;

  if (!limits.converged)
    throw std::runtime_error("solve: left-limit extrapolation did not converge");

  if (!is_downward_regular(model)) {
    sol.method = PastingMethod::ContinuousPasting;
    sol.B_c = model.c * (1.0 - limits.L_left_limit) / (1.0 - limits.G_left_limit);
    // d/dL and d/dG of c (1-L)/(1-G)
    const double dL = -model.c / (1.0 - limits.G_left_limit);
    const double dG = model.c * (1.0 - limits.L_left_limit) /
                      ((1.0 - limits.G_left_limit) * (1.0 - limits.G_left_limit));
    sol.se_B = std::sqrt(dL * dL * limits.se_L_limit * limits.se_L_limit +
                         dG * dG * limits.se_G_limit * limits.se_G_limit);
    sol.verified = true;
    sol.convexity.performed = false;
  } else {
    sol.method = PastingMethod::SmoothPastingLimit;
    if (!limits.analytic &&
        std::fabs(limits.G_left_deriv) < cfg.deriv_zero_se_mult * limits.se_G_deriv)
      throw std::domain_error(
          "solve: outside theorem hypotheses (G'(0-) indistinguishable from 0)");
    // The ratio limit equals L'(0-)/G'(0-) and its common-random-number
    // estimate is much tighter than the ratio of the two derivatives.
    const double b_tilde = model.c * limits.ratio_limit;
    sol.B_c = b_tilde;
    sol.se_B = model.c * limits.se_ratio;
    sol.bracket_lo = b_tilde;
    sol.bracket_hi = model.c;
    const ConvexityScan scan =
        convexity_scan(model, b_tilde, cfg.convexity_points, cfg.convexity_span,
                       cfg.convexity_paths, cfg.limits.threads, seed + 0x5eedULL);
    sol.convexity = assess_convexity(scan);
    sol.verified = sol.convexity.passed;
  }

  if (!(sol.B_c > 0.0) || !(sol.B_c < model.c))
    throw std::runtime_error("solve: threshold fell outside (0, c)");
  return sol;
}

ThresholdSolution solve(const ModelSpec& model, const SolveConfig& cfg, std::uint64_t seed) {
  require_admissible(model);
  const LeftLimitEstimate limits = left_limits(model, cfg.limits, seed);
  return solve_from_limits(model, limits, cfg, seed);
}

}  // namespace optstop
