#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "optstop/math.hpp"

using namespace optstop;

TEST_SUITE_BEGIN("math");

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
    const double z = normal_quantile(p);
    CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("exp_times_normal_cdf matches the naive product away from the tail") {
  CHECK(exp_times_normal_cdf(1.5, -2.0) ==
        doctest::Approx(std::exp(1.5) * normal_cdf(-2.0)).epsilon(1e-12));
  // deep tail: finite and positive where the naive product underflows to 0*inf
  const double far = exp_times_normal_cdf(800.0, -40.0);
  CHECK(std::isfinite(far));
  CHECK(far > 0.0);
}

TEST_CASE("passage cdf limits") {
  // driftless: hits almost surely
  CHECK(brownian_passage_cdf(0.0, 1.0, -0.5, 1e12) == doctest::Approx(1.0).epsilon(1e-6));
  // upward drift: total mass e^{2 mu x / sigma^2} < 1
  const double p_inf = brownian_passage_prob(0.3, 1.0, -0.5);
  CHECK(p_inf == doctest::Approx(std::exp(2.0 * 0.3 * -0.5)).epsilon(1e-12));
  CHECK(brownian_passage_cdf(0.3, 1.0, -0.5, 1e9) == doctest::Approx(p_inf).epsilon(1e-9));
  CHECK(brownian_passage_cdf(0.3, 1.0, -0.5, 0.0) == 0.0);
}

TEST_CASE("passage cdf is increasing and the density matches") {
  const double mu = -0.1, sigma = 0.4, x = -0.7;
  double prev = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double f = brownian_passage_cdf(mu, sigma, x, t);
    CHECK(f >= prev);
    prev = f;
    const double h = 1e-5 * t;
    const double fd = (brownian_passage_cdf(mu, sigma, x, t + h) -
                       brownian_passage_cdf(mu, sigma, x, t - h)) /
                      (2.0 * h);
    CHECK(brownian_passage_density(mu, sigma, x, t) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("noncross cdf integrates to the survival probability") {
  const double mu = 0.05, sigma = 0.3, y = 0.2, x = -0.4, dt = 1.7;
  const double p_cross = brownian_passage_cdf(mu, sigma, x - y, dt);
  const double total =
      brownian_noncross_cdf(mu, sigma, y, x, dt, y + mu * dt + 16.0 * sigma * std::sqrt(dt));
  CHECK(total == doctest::Approx(1.0 - p_cross).epsilon(1e-9));
  CHECK(brownian_noncross_cdf(mu, sigma, y, x, dt, x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // density consistency
  for (double z : {-0.2, 0.0, 0.3, 0.8}) {
    const double h = 1e-6;
    const double fd = (brownian_noncross_cdf(mu, sigma, y, x, dt, z + h) -
                       brownian_noncross_cdf(mu, sigma, y, x, dt, z - h)) /
                      (2.0 * h);
    CHECK(brownian_noncross_density(mu, sigma, y, x, dt, z) ==
          doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("invert_cdf solves monotone equations") {
  auto cdf = [](double t) { return brownian_passage_cdf(-0.2, 0.5, -1.0, t); };
  auto dens = [](double t) { return brownian_passage_density(-0.2, 0.5, -1.0, t); };
  for (double u : {0.01, 0.2, 0.5, 0.9, 0.999}) {
    const double t = invert_cdf(cdf, dens, 0.0, 500.0, u * cdf(500.0));
    CHECK(cdf(t) == doctest::Approx(u * cdf(500.0)).epsilon(1e-9));
  }
  // agrees with plain bisection
  const double u = 0.37 * cdf(500.0);
  const double a = invert_cdf(cdf, dens, 0.0, 500.0, u);
  const double b = invert_increasing(cdf, 0.0, 500.0, u, 80);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_SUITE_END();
