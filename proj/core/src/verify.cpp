#include "optstop/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "optstop/first_passage.hpp"
#include "optstop/rng.hpp"

namespace optstop {

SweepResult sweep_thresholds(const ModelSpec& model, double v, int grid_size,
                             std::uint64_t n_paths, std::uint64_t seed, unsigned threads) {
  if (grid_size < 16) throw std::invalid_argument("sweep_thresholds: grid_size must be >= 16");
  if (!(v > 0.0)) throw std::invalid_argument("sweep_thresholds: v must be > 0");
  require_admissible(model);

  const double c = model.c;
  SweepResult sweep;
  sweep.v = v;
  sweep.b_grid.resize(grid_size);
  for (int i = 0; i < grid_size; ++i)
    sweep.b_grid[i] = c * (0.02 + 0.96 * i / (grid_size - 1));

  const double horizon = auto_horizon(model.q(), n_paths);
  const std::size_t k = sweep.b_grid.size();
  PathStats stats =
      run_paths(n_paths, k, threads, [&](std::uint64_t path, std::span<double> out) {
        for (std::size_t i = 0; i < k; ++i) {
          const double b = sweep.b_grid[i];
          if (v <= b) {
            out[i] = c - v;  // instant stop, no randomness
            continue;
          }
          // Fresh copy of the same substream per threshold: common random
          // numbers across the whole b-grid.
          Rng rng = substream(seed, StreamKind::Sweep, path);
          const FirstPassageSample s =
              simulate_first_passage(model, std::log(b / v), horizon, rng);
          out[i] = s.hit ? s.discount_weight * (c - v * std::exp(s.position)) : 0.0;
        }
      });

  sweep.values = stats.mean;
  sweep.ses.resize(k);
  for (std::size_t i = 0; i < k; ++i) sweep.ses[i] = stats.se(i);

  sweep.argmax_index = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (sweep.values[i] > sweep.values[sweep.argmax_index]) sweep.argmax_index = i;
  sweep.argmax_b = sweep.b_grid[sweep.argmax_index];

  const double vmax = sweep.values[sweep.argmax_index];
  const double se_max = sweep.ses[sweep.argmax_index];
  sweep.plateau_lo = sweep.argmax_b;
  sweep.plateau_hi = sweep.argmax_b;
  for (std::size_t i = 0; i < k; ++i) {
    const double joint = 3.0 * std::sqrt(sweep.ses[i] * sweep.ses[i] + se_max * se_max);
    if (sweep.values[i] >= vmax - joint) {
      sweep.plateau_lo = std::min(sweep.plateau_lo, sweep.b_grid[i]);
      sweep.plateau_hi = std::max(sweep.plateau_hi, sweep.b_grid[i]);
    }
  }
  return sweep;
}

ValueFn make_value_evaluator(const ModelSpec& model, double threshold, double v_hi,
                             const McConfig& cfg) {
  const double c = model.c;
  if (model.family == Family::BrownianDrift) {
    const double gamma = brownian_gamma(model);
    return [c, threshold, gamma](double v) {
      ValuePoint p;
      p.v = v;
      if (v <= threshold) {
        p.value = c - v;
        p.stopped = true;
      } else {
        p.value = (c - threshold) * std::pow(threshold / v, gamma);
      }
      return p;
    };
  }
  // Representation-backed curve, log-linear interpolation above the threshold.
  auto grid = std::make_shared<std::vector<double>>(
      geometric_grid(threshold, std::max(v_hi, threshold * 2.0), 129));
  auto vals = std::make_shared<std::vector<ValuePoint>>();
  vals->reserve(grid->size());
  for (double v : *grid) {
    if (v <= threshold) {
      ValuePoint p;
      p.v = v;
      p.value = c - v;
      p.stopped = true;
      vals->push_back(p);
    } else {
      vals->push_back(s_b(model, threshold, v, cfg));
    }
  }
  return [c, threshold, grid, vals](double v) {
    ValuePoint p;
    p.v = v;
    if (v <= threshold) {
      p.value = c - v;
      p.stopped = true;
      return p;
    }
    const auto& g = *grid;
    if (v >= g.back()) return vals->back();
    const auto it = std::upper_bound(g.begin(), g.end(), v);
    const std::size_t j = static_cast<std::size_t>(it - g.begin());
    const double w = std::log(v / g[j - 1]) / std::log(g[j] / g[j - 1]);
    p.value = (1.0 - w) * (*vals)[j - 1].value + w * (*vals)[j].value;
    p.se = (1.0 - w) * (*vals)[j - 1].se + w * (*vals)[j].se;
    return p;
  };
}

namespace {

// Exact increment of Xbar over a window h.
double xbar_increment(const ModelSpec& model, double h, Rng& rng) {
  double dx = model.drift_adjusted_mu() * h;
  if (model.sigma > 0.0) dx += model.sigma * std::sqrt(h) * rng.normal();
  const double rate = model.total_jump_rate();
  if (rate > 0.0) {
    double t = rng.exponential(rate);
    while (t <= h) {
      if (model.lambda_up > 0.0 && model.lambda_down > 0.0) {
        const double u = rng.uniform();
        dx += (u < model.lambda_down / rate) ? -rng.exponential(model.eta_down)
                                             : rng.exponential(model.eta_up);
      } else if (model.lambda_down > 0.0) {
        dx += -rng.exponential(model.eta_down);
      } else {
        dx += rng.exponential(model.eta_up);
      }
      t += rng.exponential(rate);
    }
  }
  return dx;
}

void atomic_max(std::atomic<double>& target, double value) {
  double cur = target.load();
  while (value > cur && !target.compare_exchange_weak(cur, value)) {
  }
}

}  // namespace

OneStepReport supermartingale_check(const ModelSpec& model, const ValueFn& s_eval,
                                    std::span<const double> starts, double h,
                                    std::uint64_t n_paths, std::uint64_t seed,
                                    unsigned threads) {
  if (h < 0.0) throw std::invalid_argument("supermartingale_check: h must be >= 0");
  require_admissible(model);
  OneStepReport report;
  report.h = h;
  const double q = model.q();
  for (std::size_t si = 0; si < starts.size(); ++si) {
    const double v = starts[si];
    OneStepRow row;
    row.v = v;
    const ValuePoint sv = s_eval(v);
    row.s_v = sv.value;
    row.s_v_se = sv.se;
    if (h == 0.0) {
      row.lhs = sv.value;
      row.lhs_se = sv.se;
    } else {
      PathStats stats = run_paths(
          n_paths, 2, threads, [&](std::uint64_t path, std::span<double> out) {
            Rng rng = substream(seed + si, StreamKind::OneStep, path);
            const double nu = v * std::exp(xbar_increment(model, h, rng));
            const ValuePoint p = s_eval(nu);
            out[0] = std::exp(-q * h) * p.value;
            out[1] = p.se;
          });
      row.lhs = stats.mean[0];
      row.lhs_se = std::sqrt(stats.se(0) * stats.se(0) + stats.mean[1] * stats.mean[1]);
    }
    row.deficit = row.s_v - row.lhs;
    row.joint_se = std::sqrt(row.lhs_se * row.lhs_se + row.s_v_se * row.s_v_se);
    row.inequality_ok = row.lhs <= row.s_v + 3.0 * row.joint_se;
    report.all_ok = report.all_ok && row.inequality_ok;
    report.rows.push_back(row);
  }
  return report;
}

RealizationStats stopping_time_realization(const ModelSpec& model, double threshold, double v,
                                           std::uint64_t n_paths, double dt, std::uint64_t seed,
                                           unsigned threads) {
  if (!(v > 0.0)) throw std::invalid_argument("stopping_time_realization: v must be > 0");
  require_admissible(model);
  RealizationStats out;
  out.n_paths = n_paths;
  if (v <= threshold) {  // start inside the stopping region: tau* = 0
    out.mean_payoff = model.c - v;
    out.se = 0.0;
    out.hit_fraction = 1.0;
    out.max_formulation_gap = 0.0;
    return out;
  }
  const double x0 = std::log(threshold / v);
  const double horizon = auto_horizon(model.q(), n_paths);
  std::atomic<double> max_gap{0.0};
  PathStats stats =
      run_paths(n_paths, 2, threads, [&](std::uint64_t path, std::span<double> out_stat) {
        Rng rng = substream(seed, StreamKind::Realization, path);
        const GridCrossing g = simulate_grid_crossing(model, x0, model.m, horizon, dt, rng);
        if (!g.hit) {
          out_stat[0] = 0.0;
          out_stat[1] = 0.0;
          return;
        }
        const double v_tau = v * std::exp(g.x_at_tau);
        const double payoff =
            std::exp(-model.r * g.tau) * original_reward(v_tau, g.tau, model);
        const double nu_tau = v * std::exp(g.x_at_tau - model.m * g.tau);
        const double reduced = std::exp(-model.q() * g.tau) * reward(nu_tau, model);
        atomic_max(max_gap, std::fabs(payoff - reduced));
        out_stat[0] = payoff;
        out_stat[1] = 1.0;
      });
  out.mean_payoff = stats.mean[0];
  out.se = stats.se(0);
  out.hit_fraction = stats.mean[1];
  out.max_formulation_gap = max_gap.load();
  return out;
}

std::vector<RealizationSample> realization_samples(const ModelSpec& model, double threshold,
                                                   double v, std::uint64_t n_paths, double dt,
                                                   std::uint64_t seed) {
  if (!(v > 0.0)) throw std::invalid_argument("realization_samples: v must be > 0");
  require_admissible(model);
  std::vector<RealizationSample> rows;
  rows.reserve(n_paths);
  const double horizon = auto_horizon(model.q(), std::max<std::uint64_t>(n_paths, 1000));
  for (std::uint64_t path = 0; path < n_paths; ++path) {
    RealizationSample row;
    if (v <= threshold) {
      row.hit = true;
      row.tau = 0.0;
      row.v_at_tau = v;
      row.payoff = model.c - v;
    } else {
      Rng rng = substream(seed, StreamKind::Realization, path);
      const GridCrossing g =
          simulate_grid_crossing(model, std::log(threshold / v), model.m, horizon, dt, rng);
      row.hit = g.hit;
      row.tau = g.tau;
      row.v_at_tau = v * std::exp(g.x_at_tau);
      row.payoff =
          g.hit ? std::exp(-model.r * g.tau) * original_reward(row.v_at_tau, g.tau, model) : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace

VerificationOutcome run_full_verification(const ModelSpec& model, const VerifyConfig& cfg,
                                          std::uint64_t seed) {
  require_admissible(model);
  VerificationOutcome outcome;
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    outcome.checks.push_back({name, ok, detail});
    outcome.all_passed = outcome.all_passed && ok;
  };

  SolveConfig solve_cfg = cfg.solve;
  solve_cfg.limits.threads = cfg.threads;
  outcome.solution = solve(model, solve_cfg, seed);
  const ThresholdSolution& sol = outcome.solution;
  add("solve", sol.verified,
      "B_c = " + fmt(sol.B_c) + ", method = " + pasting_method_name(sol.method));

  if (model.family == Family::BrownianDrift) {
    const double gamma = brownian_gamma(model);
    const double exact = model.c * gamma / (gamma + 1.0);
    add("analytic-threshold", std::fabs(sol.B_c - exact) <= 1e-10,
        "B_c - c*gamma/(gamma+1) = " + fmt(sol.B_c - exact));
  }
  if (!is_downward_regular(model)) {
    LimitConfig fresh = solve_cfg.limits;
    const PastingResidual res = pasting_residual(model, sol.B_c, fresh, seed + 101);
    add("pasting-residual", std::fabs(res.residual) <= 3.0 * res.se,
        "residual = " + fmt(res.residual) + " (se " + fmt(res.se) + ")");
  }

  // Threshold sweeps: the solver's B_c must sit on the brute-force plateau for
  // every tested start, and next to the argmax at the reference start v = c.
  for (std::size_t i = 0; i < cfg.sweep_v_multipliers.size(); ++i) {
    const double v = cfg.sweep_v_multipliers[i] * model.c;
    SweepResult sweep = sweep_thresholds(model, v, cfg.sweep_grid, cfg.sweep_paths,
                                         seed + 200 + i, cfg.threads);
    add("sweep-plateau v=" + fmt(v), sweep.in_plateau(sol.B_c),
        "plateau [" + fmt(sweep.plateau_lo) + ", " + fmt(sweep.plateau_hi) + "], B_c = " +
            fmt(sol.B_c));
    if (std::fabs(v - model.c) < 1e-12) {
      add("sweep-argmax", std::fabs(sweep.argmax_b - sol.B_c) <= sweep.grid_step() + 1e-12,
          "argmax = " + fmt(sweep.argmax_b) + ", step = " + fmt(sweep.grid_step()));
      outcome.sweep = std::move(sweep);
    }
  }

  // Value curve properties.
  McConfig value_cfg;
  value_cfg.n_paths = cfg.value_paths;
  value_cfg.seed = seed + 300;
  value_cfg.threads = cfg.threads;
  const std::vector<double> grid = geometric_grid(sol.B_c / 4.0, 8.0 * model.c, cfg.value_points);
  outcome.curve = value_curve(model, sol.B_c, grid, value_cfg);
  {
    const auto& pts = outcome.curve.points;
    bool bounds = true, monotone = true, convex = true, dominance = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].value < -3.0 * pts[i].se || pts[i].value > model.c + 3.0 * pts[i].se)
        bounds = false;
      if (pts[i].value + 3.0 * pts[i].se < reward_plus(pts[i].v, model)) dominance = false;
      if (i > 0) {
        const double joint =
            3.0 * std::sqrt(pts[i].se * pts[i].se + pts[i - 1].se * pts[i - 1].se);
        if (pts[i].value > pts[i - 1].value + joint) monotone = false;
      }
      if (i > 0 && i + 1 < pts.size()) {
        const double d2 = pts[i + 1].value - 2.0 * pts[i].value + pts[i - 1].value;
        const double se = std::sqrt(pts[i + 1].se * pts[i + 1].se +
                                    4.0 * pts[i].se * pts[i].se +
                                    pts[i - 1].se * pts[i - 1].se);
        if (d2 < -3.0 * se) convex = false;
      }
    }
    add("value-bounds", bounds, "0 <= s <= c within 3 se on " + fmt(pts.size()) + " points");
    add("value-monotone", monotone, "nonincreasing within 3 se");
    add("value-convex", convex, "second differences >= -3 se");
    add("value-dominance", dominance, "s >= f+ within 3 se");
    const ValuePoint tiny = s_b(model, sol.B_c, 1e-12, value_cfg);
    add("value-limit-at-0", tiny.value == model.c - 1e-12, "s(1e-12) = " + fmt(tiny.value));
    const PastingGap gap = pasting_gap(model, sol.B_c, value_cfg);
    add("value-pasting", gap.ok,
        "gap = " + fmt(gap.gap) + " (tol " + fmt(gap.tol) + ") at b = " + fmt(sol.B_c));
  }

  // Original-problem realization at v = c against the drift-adjusted value.
  {
    McConfig ref_cfg = value_cfg;
    ref_cfg.seed = seed + 400;
    const ValuePoint ref = s_b(model, sol.B_c, model.c, ref_cfg);
    const RealizationStats real = stopping_time_realization(
        model, sol.B_c, model.c, cfg.realization_paths, cfg.realization_dt, seed + 401,
        cfg.threads);
    const double joint = std::sqrt(ref.se * ref.se + real.se * real.se);
    add("realization", std::fabs(real.mean_payoff - ref.value) <= 3.0 * joint,
        "payoff = " + fmt(real.mean_payoff) + ", s(v) = " + fmt(ref.value) + ", joint se = " +
            fmt(joint));
  }

  // One-step Snell inequality at B_c/4, B_c and 2c; near-equality at 2c.
  {
    McConfig eval_cfg = value_cfg;
    eval_cfg.seed = seed + 500;
    const double v_hi = 4.0 * model.c * std::exp(1.0);
    const ValueFn s_eval = make_value_evaluator(model, sol.B_c, v_hi, eval_cfg);
    const double starts[] = {sol.B_c / 4.0, sol.B_c, 2.0 * model.c};
    const OneStepReport rep = supermartingale_check(model, s_eval, starts, cfg.onestep_h,
                                                    cfg.onestep_paths, seed + 501, cfg.threads);
    add("snell-inequality", rep.all_ok, "h = " + fmt(cfg.onestep_h));
    const OneStepRow& far = rep.rows.back();
    add("snell-martingale v=2c", std::fabs(far.deficit) <= 3.0 * far.joint_se,
        "deficit = " + fmt(far.deficit) + " (joint se " + fmt(far.joint_se) + ")");
  }

  return outcome;
}

}  // namespace optstop
