#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optstop/laplace.hpp"
#include "optstop/model.hpp"

namespace optstop {

// Undiscounted linear reward f(nu) = -nu + c on the drift-adjusted scale.
double reward(double nu, const ModelSpec& model);
// f^+(nu) = max(f(nu), 0).
double reward_plus(double nu, const ModelSpec& model);
// Reward of the original formulation, h(V, t) = -V + c e^{mt}.
double original_reward(double v_at_t, double t, const ModelSpec& model);

enum class CurveSource { Representation, MonteCarlo, AnalyticBrownian };

struct ValuePoint {
  double v = 0.0;
  double value = 0.0;
  double se = 0.0;
  bool stopped = false;  // v <= b branch (exact)
};

struct ValueCurve {
  std::vector<ValuePoint> points;
  double threshold_b = 0.0;
  CurveSource source = CurveSource::Representation;
  bool remark_mode = false;
};

// Auxiliary value s_b(v): exact c - v for v <= b, otherwise the Laplace
// representation -v G(ln(b/v)) + c L(ln(b/v)) (closed form for BrownianDrift,
// Monte Carlo transforms otherwise).
ValuePoint s_b(const ModelSpec& model, double b, double v, const McConfig& cfg);

// Direct simulation of tau_b = inf{t : e^{-mt} V_t <= b} and the discounted
// payoff. Exact instant stop when v <= b.
ValuePoint mc_value(const ModelSpec& model, double b, double v, const McConfig& cfg);

// s(v) = s_{B_c}(v) on a grid.
ValueCurve value_curve(const ModelSpec& model, double threshold, std::span<const double> v_grid,
                       const McConfig& cfg);

std::vector<double> geometric_grid(double lo, double hi, int n);
// Default evaluation grid: 64 geometric points over [B_c/4, 8c].
std::vector<double> default_value_grid(const ModelSpec& model, double threshold);

// Continuity of s_b across the threshold, evaluated one-sided at
// v = b (1 -+ 1e-6). The tolerance is max(1e-6 * c, 3 joint se).
struct PastingGap {
  double left = 0.0;
  double right = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool ok = false;
};
PastingGap pasting_gap(const ModelSpec& model, double b, const McConfig& cfg);

}  // namespace optstop
