#include "optstop/value.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "optstop/first_passage.hpp"
#include "optstop/rng.hpp"

namespace optstop {

double reward(double nu, const ModelSpec& model) { return -nu + model.c; }

double reward_plus(double nu, const ModelSpec& model) {
  return std::max(reward(nu, model), 0.0);
}

double original_reward(double v_at_t, double t, const ModelSpec& model) {
  return -v_at_t + model.c * std::exp(model.m * t);
}

namespace {

void check_bv(const ModelSpec& model, double b, double v) {
  if (!(b > 0.0) || !(b < model.c))
    throw std::invalid_argument("threshold b must lie in (0, c)");
  if (!(v > 0.0)) throw std::invalid_argument("v must be > 0");
}

ValuePoint exact_stop(const ModelSpec& model, double v) {
  ValuePoint p;
  p.v = v;
  p.value = model.c - v;
  p.se = 0.0;
  p.stopped = true;
  return p;
}

}  // namespace

ValuePoint s_b(const ModelSpec& model, double b, double v, const McConfig& cfg) {
  check_bv(model, b, v);
  if (v <= b) return exact_stop(model, v);
  const double x = std::log(b / v);
  const LaplaceEstimate pair = transform_pair(model, x, cfg);
  ValuePoint p;
  p.v = v;
  p.value = -v * pair.G_hat + model.c * pair.L_hat;
  p.stopped = false;
  if (pair.source == EstimateSource::MonteCarlo) {
    const double var = v * v * pair.se_G * pair.se_G + model.c * model.c * pair.se_L * pair.se_L -
                       2.0 * v * model.c * pair.cov_LG;
    p.se = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return p;
}

ValuePoint mc_value(const ModelSpec& model, double b, double v, const McConfig& cfg) {
  check_bv(model, b, v);
  if (v <= b) return exact_stop(model, v);  // tau_b = 0 on every path
  require_admissible(model);
  const double x = std::log(b / v);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : auto_horizon(model.q(), cfg.n_paths);
  const double c = model.c;
  PathStats stats = run_paths(cfg.n_paths, 1, cfg.threads,
                              [&](std::uint64_t path, std::span<double> out) {
                                Rng rng = substream(cfg.seed, StreamKind::ValueGrid, path);
                                const FirstPassageSample s =
                                    simulate_first_passage(model, x, horizon, rng);
                                out[0] = s.hit ? s.discount_weight * (c - v * std::exp(s.position))
                                               : 0.0;
                              });
  ValuePoint p;
  p.v = v;
  p.value = stats.mean[0];
  p.se = stats.se(0);
  p.stopped = false;
  return p;
}

ValueCurve value_curve(const ModelSpec& model, double threshold, std::span<const double> v_grid,
                       const McConfig& cfg) {
  const AssumptionReport rep = require_admissible(model);
  ValueCurve curve;
  curve.threshold_b = threshold;
  curve.remark_mode = rep.remark_mode();
  curve.source = model.family == Family::BrownianDrift ? CurveSource::AnalyticBrownian
                                                       : CurveSource::Representation;
  curve.points.reserve(v_grid.size());
  for (double v : v_grid) curve.points.push_back(s_b(model, threshold, v, cfg));
  return curve;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("geometric_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

std::vector<double> default_value_grid(const ModelSpec& model, double threshold) {
  return geometric_grid(threshold / 4.0, 8.0 * model.c, 64);
}

PastingGap pasting_gap(const ModelSpec& model, double b, const McConfig& cfg) {
  const ValuePoint left = s_b(model, b, b * (1.0 - 1e-6), cfg);
  const ValuePoint right = s_b(model, b, b * (1.0 + 1e-6), cfg);
  PastingGap g;
  g.left = left.value;
  g.right = right.value;
  g.gap = std::fabs(left.value - right.value);
  g.tol = std::max(1e-6 * model.c,
                   3.0 * std::sqrt(left.se * left.se + right.se * right.se));
  g.ok = g.gap <= g.tol;
  return g;
}

}  // namespace optstop
