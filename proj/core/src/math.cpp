#include "optstop/math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace optstop {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

namespace {

// Mill-ratio style expansion of Phi(z) for z << 0:
// Phi(z) = phi(z)/(-z) * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
double log_normal_cdf_lower_tail(double z) {
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - 0.5 * std::log(2.0 * M_PI) - std::log(-z) + std::log(series);
}

}  // namespace

double exp_times_normal_cdf(double a, double z) {
  if (z > -8.0) return std::exp(a) * normal_cdf(z);
  return std::exp(a + log_normal_cdf_lower_tail(z));
}

double normal_quantile(double p) {
  // AS 241 algorithm PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e+0) *
                  r +
              3.64784832476320460504e+0) *
                 r +
             5.76949722146069140550e+0) *
                r +
            4.63033784615654529590e+0) *
               r +
           1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e+0) *
                r +
            2.05319162663775882187e+0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e+0) *
                r +
            5.46378491116411436990e+0) *
               r +
           6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return (q < 0.0) ? -val : val;
}

double brownian_passage_cdf(double mu, double sigma, double x, double t) {
  if (t <= 0.0) return 0.0;
  const double s = sigma * std::sqrt(t);
  if (mu == 0.0) return 2.0 * normal_cdf(x / s);
  return normal_cdf((x - mu * t) / s) +
         exp_times_normal_cdf(2.0 * mu * x / (sigma * sigma), (x + mu * t) / s);
}

double brownian_passage_prob(double mu, double sigma, double x) {
  if (mu <= 0.0) return 1.0;
  return std::exp(2.0 * mu * x / (sigma * sigma));
}

double brownian_passage_density(double mu, double sigma, double x, double t) {
  if (t <= 0.0) return 0.0;
  const double s2t = sigma * sigma * t;
  const double e = -(x - mu * t) * (x - mu * t) / (2.0 * s2t);
  if (e < -700.0) return 0.0;
  return (-x) / std::sqrt(2.0 * M_PI * s2t * t * t) * std::exp(e);
}

double brownian_noncross_density(double mu, double sigma, double y, double x,
                                 double dt, double z) {
  const double s2 = sigma * sigma * dt;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * s2);
  const double u1 = z - y - mu * dt;
  const double a = -2.0 * mu * (y - x) / (sigma * sigma);
  const double u2 = z - (2.0 * x - y) - mu * dt;
  const double e1 = -0.5 * u1 * u1 / s2;
  const double e2 = a - 0.5 * u2 * u2 / s2;
  const double direct = e1 > -700.0 ? std::exp(e1) : 0.0;
  const double image = e2 > -700.0 ? std::exp(e2) : 0.0;
  return norm * (direct - image);
}

double brownian_noncross_cdf(double mu, double sigma, double y, double x,
                             double dt, double z) {
  const double s = sigma * std::sqrt(dt);
  const double direct =
      normal_cdf((z - y - mu * dt) / s) - normal_cdf((x - y - mu * dt) / s);
  const double a = -2.0 * mu * (y - x) / (sigma * sigma);
  const double image = exp_times_normal_cdf(a, (z - 2.0 * x + y - mu * dt) / s) -
                       exp_times_normal_cdf(a, (y - x - mu * dt) / s);
  return direct - image;
}

}  // namespace optstop
