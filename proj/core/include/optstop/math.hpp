#pragma once

#include <cstdint>

namespace optstop {

// Standard normal CDF, accurate in both tails (erfc based).
double normal_cdf(double z);

// Standard normal quantile (Wichura's AS 241, double precision).
// p must lie in (0,1).
double normal_quantile(double p);

// exp(a) * normal_cdf(z) without overflow when a is large positive and
// z is far in the lower tail. The combination is bounded whenever it
// arises from a first-passage identity.
double exp_times_normal_cdf(double a, double z);

// P(tau <= t) for tau = first time mu*s + sigma*W_s drops to level x < 0,
// started at 0. sigma > 0, t >= 0.
double brownian_passage_cdf(double mu, double sigma, double x, double t);

// P(passage ever) = lim_{t->inf} brownian_passage_cdf.
double brownian_passage_prob(double mu, double sigma, double x);

// P(X_dt <= z, min_{[0,dt]} X > x | X_0 = y) for X drifted Brownian motion,
// z >= x, y > x. Reflection formula; used for endpoint sampling conditioned
// on no crossing.
double brownian_noncross_cdf(double mu, double sigma, double y, double x,
                             double dt, double z);

// Solves f(t) = u for increasing f on [lo, hi] by bisection. f(lo) <= u <= f(hi)
// is assumed; the bracket is halved a fixed number of times so the result is a
// pure function of the inputs.
template <typename F>
double invert_increasing(F&& f, double lo, double hi, double u, int iters = 64) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Same equation solved by bracket-guarded Newton using the density f' = dens;
// falls back to a bisection step whenever Newton leaves the bracket. Also a
// pure function of the inputs.
template <typename F, typename G>
double invert_cdf(F&& cdf, G&& dens, double lo, double hi, double u) {
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 64; ++i) {
    const double f = cdf(t) - u;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    const double d = dens(t);
    double next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double move = next - t;
    t = next;
    if (move < 1e-12 * (t + 1e-300) && move > -1e-12 * (t + 1e-300)) break;
  }
  return t;
}

// First-passage time density matching brownian_passage_cdf.
double brownian_passage_density(double mu, double sigma, double x, double t);

// Sub-density of (X_dt = z, no crossing of x) matching brownian_noncross_cdf.
double brownian_noncross_density(double mu, double sigma, double y, double x,
                                 double dt, double z);

}  // namespace optstop
