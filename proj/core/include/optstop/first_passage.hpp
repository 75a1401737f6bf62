#pragma once

#include <cstdint>

#include "optstop/model.hpp"
#include "optstop/rng.hpp"

namespace optstop {

// One first-passage event of Xbar = -mt + X below a level x < 0, truncated at
// `horizon`. Non-hitting paths carry discount_weight 0; the induced bias is
// bounded by e^{-(r-m) * horizon}.
struct FirstPassageSample {
  bool hit = false;
  double tau = 0.0;       // passage time if hit, else the horizon
  double position = 0.0;  // Xbar at tau (== x for continuous crossings)
  double discount_weight = 0.0;  // e^{-(r-m) tau} if hit, else 0
};

// Horizon making the truncation bias bound e^{-q h} at most one tenth of the
// worst-case Monte Carlo standard error 0.5/sqrt(n).
double auto_horizon(double q, std::uint64_t n_paths);

// Samples (tau_x, Xbar_tau) exactly:
//  - BrownianDrift: inverse-CDF draw from the drifted Brownian first-passage
//    law (one uniform per path, monotone in both the uniform and the level).
//  - jump families: jump-adapted scheme with exact exponential inter-jump
//    times; diffusion segments use the exact crossing law and endpoint
//    sampling conditioned on not crossing. No time grid anywhere.
// Throws std::domain_error unless x < 0, horizon > 0 and both finite.
FirstPassageSample simulate_first_passage(const ModelSpec& model, double x,
                                          double horizon, Rng& rng);

// Time-stepping route with Brownian-bridge crossing correction, simulating the
// original process X against the moving boundary l(t) = x0 + slope * t. Used
// as the independent cross-check of the exact sampler (slope = m recovers the
// Xbar passage) and by the original-scale stopping-time realization.
struct GridCrossing {
  bool hit = false;
  double tau = 0.0;
  double x_at_tau = 0.0;  // X at tau; on the boundary for diffusive crossings
};

GridCrossing simulate_grid_crossing(const ModelSpec& model, double x0, double slope,
                                    double horizon, double dt, Rng& rng);

}  // namespace optstop
