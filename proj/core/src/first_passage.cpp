#include "optstop/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "optstop/math.hpp"

namespace optstop {

double auto_horizon(double q, std::uint64_t n_paths) {
  const double n = static_cast<double>(std::max<std::uint64_t>(n_paths, 2));
  return std::log(20.0 * std::sqrt(n)) / q;
}

namespace {

FirstPassageSample no_hit(double horizon, double position) {
  FirstPassageSample s;
  s.hit = false;
  s.tau = horizon;
  s.position = position;
  s.discount_weight = 0.0;
  return s;
}

FirstPassageSample hit_at(double q, double tau, double position) {
  FirstPassageSample s;
  s.hit = true;
  s.tau = tau;
  s.position = position;
  s.discount_weight = std::exp(-q * tau);
  return s;
}

// Exact first-passage draw for Xbar = mu_bar t + sigma W below x, one uniform.
FirstPassageSample brownian_passage(const ModelSpec& model, double x, double horizon,
                                    Rng& rng) {
  const double mu_bar = model.drift_adjusted_mu();
  const double sigma = model.sigma;
  const double u = rng.uniform();
  const double f_h = brownian_passage_cdf(mu_bar, sigma, x, horizon);
  if (u >= f_h) return no_hit(horizon, 0.0);
  double tau;
  if (mu_bar == 0.0) {
    // u = 2 Phi(x / (sigma sqrt(t))) inverts in closed form.
    const double z = normal_quantile(0.5 * u);
    tau = (x * x) / (sigma * sigma * z * z);
  } else {
    tau = invert_cdf([&](double t) { return brownian_passage_cdf(mu_bar, sigma, x, t); },
                     [&](double t) { return brownian_passage_density(mu_bar, sigma, x, t); },
                     0.0, horizon, u);
  }
  return hit_at(model.q(), tau, x);
}

// Draws one jump of the compound part; magnitude is exponential.
double draw_jump(const ModelSpec& model, Rng& rng) {
  if (model.lambda_up > 0.0 && model.lambda_down > 0.0) {
    const double u = rng.uniform();
    if (u < model.lambda_down / model.total_jump_rate())
      return -rng.exponential(model.eta_down);
    return rng.exponential(model.eta_up);
  }
  if (model.lambda_down > 0.0) return -rng.exponential(model.eta_down);
  return rng.exponential(model.eta_up);
}

// Endpoint of a diffusion segment of length dt started at y, conditioned on
// staying above x throughout. v is the conditional quantile in (0,1).
double conditioned_endpoint(double mu, double sigma, double y, double x, double dt,
                            double no_cross_prob, double v) {
  const double target = v * no_cross_prob;
  double hi = y + mu * dt + 14.0 * sigma * std::sqrt(dt);
  const double at_hi = brownian_noncross_cdf(mu, sigma, y, x, dt, hi);
  if (target >= at_hi) return hi;
  return invert_cdf([&](double z) { return brownian_noncross_cdf(mu, sigma, y, x, dt, z); },
                    [&](double z) { return brownian_noncross_density(mu, sigma, y, x, dt, z); },
                    x, hi, target);
}

// Jump-adapted sampler for KouJumpDiffusion and CompoundPoissonDrift. Every
// random quantity is drawn by inverse CDF, so stream consumption per segment
// is fixed and paths stay aligned across levels under a shared substream.
FirstPassageSample jump_adapted_passage(const ModelSpec& model, double x,
                                        double horizon, Rng& rng) {
  const double mu_bar = model.drift_adjusted_mu();
  const double sigma = model.sigma;
  const double rate = model.total_jump_rate();
  const double q = model.q();

  double t = 0.0;
  double pos = 0.0;
  while (t < horizon) {
    const double gap = rng.exponential(rate);
    const double seg = std::min(gap, horizon - t);
    const bool jump_ends_segment = gap <= horizon - t;

    if (sigma > 0.0) {
      const double p_cross = brownian_passage_cdf(mu_bar, sigma, x - pos, seg);
      const double u = rng.uniform();
      if (u < p_cross) {
        const double rel = x - pos;
        const double dt_cross = invert_cdf(
            [&](double s) { return brownian_passage_cdf(mu_bar, sigma, rel, s); },
            [&](double s) { return brownian_passage_density(mu_bar, sigma, rel, s); }, 0.0,
            seg, u);
        return hit_at(q, t + dt_cross, x);
      }
      const double v = (u - p_cross) / (1.0 - p_cross);
      if (p_cross < 1e-12) {
        // Barrier unreachable within the segment; the conditioning is a no-op
        // and the endpoint is plain Gaussian (same single-uniform consumption).
        pos += mu_bar * seg + sigma * std::sqrt(seg) * normal_quantile(v);
      } else {
        pos = conditioned_endpoint(mu_bar, sigma, pos, x, seg, 1.0 - p_cross, v);
      }
    } else {
      // mu_bar >= 0 for the pure-jump family: no crossing between jumps.
      pos += mu_bar * seg;
    }

    t += seg;
    if (!jump_ends_segment) break;
    pos += draw_jump(model, rng);
    if (pos <= x) return hit_at(q, t, pos);
  }
  return no_hit(horizon, pos);
}

}  // namespace

FirstPassageSample simulate_first_passage(const ModelSpec& model, double x,
                                          double horizon, Rng& rng) {
  if (!std::isfinite(x) || !(x < 0.0))
    throw std::domain_error("simulate_first_passage: level x must be finite and < 0");
  if (!std::isfinite(horizon) || !(horizon > 0.0))
    throw std::domain_error("simulate_first_passage: horizon must be finite and > 0");
  if (model.family == Family::BrownianDrift) return brownian_passage(model, x, horizon, rng);
  return jump_adapted_passage(model, x, horizon, rng);
}

GridCrossing simulate_grid_crossing(const ModelSpec& model, double x0, double slope,
                                    double horizon, double dt, Rng& rng) {
  if (!std::isfinite(x0) || !(x0 < 0.0))
    throw std::domain_error("simulate_grid_crossing: x0 must be finite and < 0");
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::domain_error("simulate_grid_crossing: dt and horizon must be > 0");

  const double sigma = model.sigma;
  const double rate = model.total_jump_rate();
  const bool jumps = rate > 0.0;

  double t = 0.0;
  double pos = 0.0;
  double next_jump = jumps ? rng.exponential(rate) : horizon + 1.0;

  while (t < horizon) {
    const double t_next = std::min({t + dt, next_jump, horizon});
    const double seg = t_next - t;
    const double bound_now = x0 + slope * t;
    const double bound_next = x0 + slope * t_next;

    if (sigma > 0.0 && seg > 0.0) {
      const double z = pos + model.mu * seg + sigma * std::sqrt(seg) * rng.normal();
      const double d0 = pos - bound_now;
      const double d1 = z - bound_next;
      if (d1 <= 0.0) {
        // Endpoint below the boundary: the first touch happened inside the
        // segment, at the boundary itself (continuous paths do not overshoot).
        GridCrossing g;
        g.hit = true;
        g.tau = t_next;
        g.x_at_tau = bound_next;
        return g;
      }
      // Brownian bridge against a linear boundary.
      const double p_bridge = std::exp(-2.0 * d0 * d1 / (sigma * sigma * seg));
      if (rng.uniform() < p_bridge) {
        GridCrossing g;
        g.hit = true;
        g.tau = t + 0.5 * seg;
        g.x_at_tau = x0 + slope * g.tau;
        return g;
      }
      pos = z;
    } else if (seg > 0.0) {
      const double z = pos + model.mu * seg;
      const double d0 = pos - bound_now;
      const double d1 = z - bound_next;
      if (d1 <= 0.0) {
        const double frac = d0 / (d0 - d1);  // exact for piecewise-linear paths
        GridCrossing g;
        g.hit = true;
        g.tau = t + frac * seg;
        g.x_at_tau = x0 + slope * g.tau;
        return g;
      }
      pos = z;
    }

    t = t_next;
    if (jumps && t == next_jump && t < horizon) {
      pos += draw_jump(model, rng);
      if (pos <= x0 + slope * t) {
        GridCrossing g;
        g.hit = true;
        g.tau = t;
        g.x_at_tau = pos;
        return g;
      }
      next_jump = t + rng.exponential(rate);
    }
  }
  GridCrossing g;
  g.hit = false;
  g.tau = horizon;
  g.x_at_tau = pos;
  return g;
}

}  // namespace optstop
