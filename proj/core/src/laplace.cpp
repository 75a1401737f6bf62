#include "optstop/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "optstop/first_passage.hpp"
#include "optstop/rng.hpp"

namespace optstop {

double brownian_gamma(const ModelSpec& model) {
  if (model.family != Family::BrownianDrift)
    throw std::domain_error("brownian_gamma: only defined for BrownianDrift");
  const double mu_bar = model.drift_adjusted_mu();
  const double s2 = model.sigma * model.sigma;
  return (mu_bar + std::sqrt(mu_bar * mu_bar + 2.0 * model.q() * s2)) / s2;
}

LaplaceEstimate analytic_pair_brownian(const ModelSpec& model, double x) {
  if (model.family != Family::BrownianDrift)
    throw std::domain_error("analytic_pair_brownian: wrong model family");
  if (!(x < 0.0)) throw std::domain_error("analytic_pair_brownian: x must be < 0");
  require_admissible(model);
  const double gamma = brownian_gamma(model);
  LaplaceEstimate est;
  est.x = x;
  est.L_hat = std::exp(gamma * x);
  est.G_hat = std::exp((gamma + 1.0) * x);
  est.n_paths = 0;
  est.horizon = std::numeric_limits<double>::infinity();
  est.source = EstimateSource::Analytic;
  return est;
}

LaplaceEstimate mc_pair(const ModelSpec& model, double x, const McConfig& cfg) {
  if (!(x < 0.0)) throw std::domain_error("mc_pair: x must be < 0");
  if (cfg.n_paths < 1) throw std::invalid_argument("mc_pair: n_paths must be >= 1");
  require_admissible(model);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : auto_horizon(model.q(), cfg.n_paths);

  PathStats stats = run_paths(cfg.n_paths, 2, cfg.threads,
                              [&](std::uint64_t path, std::span<double> out) {
                                Rng rng = substream(cfg.seed, StreamKind::PathSampler, path);
                                const FirstPassageSample s =
                                    simulate_first_passage(model, x, horizon, rng);
                                out[0] = s.discount_weight;
                                out[1] = s.hit ? s.discount_weight * std::exp(s.position) : 0.0;
                              });

  LaplaceEstimate est;
  est.x = x;
  est.L_hat = stats.mean[0];
  est.G_hat = stats.mean[1];
  est.se_L = stats.se(0);
  est.se_G = stats.se(1);
  est.cov_LG = stats.covariance(0, 1) / static_cast<double>(cfg.n_paths);
  est.n_paths = cfg.n_paths;
  est.horizon = horizon;
  est.source = EstimateSource::MonteCarlo;
  return est;
}

LaplaceEstimate transform_pair(const ModelSpec& model, double x, const McConfig& cfg) {
  if (model.family == Family::BrownianDrift) return analytic_pair_brownian(model, x);
  return mc_pair(model, x, cfg);
}

Extrapolation richardson_limit(std::span<const double> x, std::span<const double> y,
                               double rel_tol, int max_cols) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n)
    throw std::invalid_argument("richardson_limit: mismatched or empty inputs");
  // Neville tableau toward x = 0; row i keeps its best extrapolant.
  std::vector<std::vector<double>> t(n);
  Extrapolation out;
  for (std::size_t i = 0; i < n; ++i) {
    const int cols = static_cast<int>(std::min<std::size_t>(i, max_cols));
    t[i].assign(cols + 1, 0.0);
    t[i][0] = y[i];
    for (int j = 1; j <= cols; ++j) {
      const double ratio = x[i - j] / x[i];
      t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (ratio - 1.0);
    }
    out.diagonal.push_back(t[i].back());
  }
  out.chosen_index = n - 1;
  if (n >= 3) {
    double best = std::fabs(out.diagonal[2] - out.diagonal[1]);
    out.chosen_index = 2;
    for (std::size_t i = 3; i < n; ++i) {
      const double d = std::fabs(out.diagonal[i] - out.diagonal[i - 1]);
      if (d <= best) {
        best = d;
        out.chosen_index = i;
      }
    }
  }
  out.value = out.diagonal[out.chosen_index];
  if (out.chosen_index >= 1) {
    const double d = std::fabs(out.value - out.diagonal[out.chosen_index - 1]);
    out.converged = d < rel_tol * std::max(std::fabs(out.value), 1e-30);
  }
  return out;
}

namespace {

LeftLimitEstimate analytic_left_limits(const ModelSpec& model) {
  const double gamma = brownian_gamma(model);
  LeftLimitEstimate est;
  est.ratio_limit = gamma / (gamma + 1.0);
  est.L_left_limit = 1.0;
  est.G_left_limit = 1.0;
  est.L_left_deriv = gamma;
  est.G_left_deriv = gamma + 1.0;
  est.continuous_at_zero = true;
  est.converged = true;
  est.analytic = true;
  return est;
}

double batch_sd(const std::vector<double>& vals) {
  const std::size_t n = vals.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  // sd of the mean of the batch means = sd(batches) / sqrt(n)
  return std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
}

}  // namespace

LeftLimitEstimate left_limits(const ModelSpec& model, const LimitConfig& cfg,
                              std::uint64_t seed) {
  require_admissible(model);
  if (cfg.ladder_levels < 2) throw std::invalid_argument("left_limits: need >= 2 levels");
  if (!(cfg.ladder_start > 0.0)) throw std::invalid_argument("left_limits: ladder_start > 0");

  if (model.family == Family::BrownianDrift && !cfg.force_monte_carlo)
    return analytic_left_limits(model);

  const bool continuous = is_downward_regular(model);
  const int levels = cfg.ladder_levels;
  const double horizon =
      cfg.horizon > 0.0 ? cfg.horizon : auto_horizon(model.q(), cfg.paths_per_level);

  LeftLimitEstimate est;
  est.continuous_at_zero = continuous;
  est.analytic = false;

  std::vector<double> xs(levels);
  std::vector<PathStats> per_level(levels);
  for (int k = 0; k < levels; ++k) {
    const double x = -cfg.ladder_start * std::pow(2.0, -k);
    xs[k] = x;
    // Same substreams at every level: common random numbers down the ladder.
    per_level[k] = run_paths(cfg.paths_per_level, 2, cfg.threads,
                             [&](std::uint64_t path, std::span<double> out) {
                               Rng rng = substream(seed, StreamKind::PathSampler, path);
                               const FirstPassageSample s =
                                   simulate_first_passage(model, x, horizon, rng);
                               out[0] = s.discount_weight;
                               out[1] = s.hit ? s.discount_weight * std::exp(s.position) : 0.0;
                             });
    LaplaceEstimate le;
    le.x = x;
    le.L_hat = per_level[k].mean[0];
    le.G_hat = per_level[k].mean[1];
    le.se_L = per_level[k].se(0);
    le.se_G = per_level[k].se(1);
    le.cov_LG = per_level[k].covariance(0, 1) / static_cast<double>(cfg.paths_per_level);
    le.n_paths = cfg.paths_per_level;
    le.horizon = horizon;
    le.source = EstimateSource::MonteCarlo;
    est.ladder.push_back(le);
    est.levels_used.push_back(x);
  }

  // Extrapolate a functional of (L, G, x); the batch standard error is read
  // off the same tableau entry the full-data extrapolation settled on.
  struct Limit {
    Extrapolation ext;
    double se = 0.0;
  };
  auto extrapolate = [&](auto&& value_of_pair) {
    std::vector<double> ys(levels);
    for (int k = 0; k < levels; ++k)
      ys[k] = value_of_pair(est.ladder[k].L_hat, est.ladder[k].G_hat, xs[k]);
    Limit lim;
    lim.ext = richardson_limit(xs, ys, cfg.rel_tol);
    const std::size_t nb = per_level[0].batch_mean.size();
    std::vector<double> per_batch(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      for (int k = 0; k < levels; ++k)
        ys[k] = value_of_pair(per_level[k].batch_mean[b][0], per_level[k].batch_mean[b][1],
                              xs[k]);
      per_batch[b] = richardson_limit(xs, ys, cfg.rel_tol).diagonal[lim.ext.chosen_index];
    }
    lim.se = batch_sd(per_batch);
    return lim;
  };

  const Limit ratio =
      extrapolate([](double l, double g, double) { return (1.0 - l) / (1.0 - g); });
  est.ratio_limit = ratio.ext.value;
  est.ratio_extrapolants = ratio.ext.diagonal;
  est.converged = ratio.ext.converged;
  est.se_ratio = ratio.se;

  if (continuous) {
    est.L_left_limit = 1.0;
    est.G_left_limit = 1.0;
    const Limit dL = extrapolate([](double l, double, double x) { return (1.0 - l) / (-x); });
    const Limit dG = extrapolate([](double, double g, double x) { return (1.0 - g) / (-x); });
    est.L_left_deriv = dL.ext.value;
    est.G_left_deriv = dG.ext.value;
    est.se_L_deriv = dL.se;
    est.se_G_deriv = dG.se;
  } else {
    const Limit l0 = extrapolate([](double l, double, double) { return l; });
    const Limit g0 = extrapolate([](double, double g, double) { return g; });
    est.L_left_limit = l0.ext.value;
    est.G_left_limit = g0.ext.value;
    est.se_L_limit = l0.se;
    est.se_G_limit = g0.se;
    est.L_left_deriv = std::numeric_limits<double>::quiet_NaN();
    est.G_left_deriv = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

}  // namespace optstop
