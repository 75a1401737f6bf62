#include <cmath>
#include <vector>

#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "optstop/laplace.hpp"
#include "optstop/model.hpp"
#include "oracles.hpp"

using namespace optstop;

namespace {

const ModelSpec kDesk = ModelSpec::brownian(0.0, 0.3, 0.05, 0.0, 1.0);
const ModelSpec kUnitBm = ModelSpec::brownian(0.0, 1.0, 0.5, 0.0, 1.0);
const ModelSpec kDeskCp = ModelSpec::compound_poisson(0.2, 1.0, 2.0, 0.1, 0.0, 1.0);

}  // namespace

TEST_SUITE_BEGIN("laplace");

TEST_CASE("gamma for the desk diffusion") {
  CHECK(brownian_gamma(kDesk) ==
        doctest::Approx(std::sqrt(2.0 * 0.05 * 0.09) / 0.09).epsilon(1e-14));
  CHECK(brownian_gamma(kDesk) == doctest::Approx(1.0540925533894598).epsilon(1e-12));
  CHECK(brownian_gamma(kUnitBm) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("analytic pair examples") {
  const LaplaceEstimate a = analytic_pair_brownian(kUnitBm, -1.0);
  CHECK(a.L_hat == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(a.G_hat == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(a.se_L == 0.0);
  CHECK(a.se_G == 0.0);

  const LaplaceEstimate b = analytic_pair_brownian(kDesk, -0.1);
  CHECK(b.L_hat == doctest::Approx(0.89995).epsilon(1e-4));
  CHECK(b.G_hat == doctest::Approx(0.81431).epsilon(1e-4));

  // x -> 0-: both transforms tend to 1
  const LaplaceEstimate c = analytic_pair_brownian(kDesk, -1e-12);
  CHECK(c.L_hat == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.G_hat == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(analytic_pair_brownian(kDeskCp, -1.0), std::domain_error);
  CHECK_THROWS_AS(analytic_pair_brownian(kDesk, 0.0), std::domain_error);
}

TEST_CASE("monte carlo pair agrees with the analytic pair") {
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.seed = 4;
  const LaplaceEstimate mc = mc_pair(kUnitBm, -1.0, cfg);
  CHECK(std::fabs(mc.L_hat - std::exp(-1.0)) <= 3.0 * mc.se_L);
  CHECK(std::fabs(mc.G_hat - std::exp(-2.0)) <= 3.0 * mc.se_G);
  CHECK(mc.L_hat >= 0.0);
  CHECK(mc.L_hat <= 1.0);
  CHECK(mc.G_hat >= 0.0);
  // continuous-case coupling: no overshoot, so G_hat = e^x L_hat
  CHECK(mc.G_hat == doctest::Approx(std::exp(-1.0) * mc.L_hat).epsilon(1e-13));
}

TEST_CASE("monte carlo pair matches the Cramer-Lundberg closed form") {
  const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
  CHECK(cl.rho == doctest::Approx(0.2655644370746375).epsilon(1e-12));
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.seed = 5;
  for (double x : {-0.05, -0.5, -2.0}) {
    const LaplaceEstimate mc = mc_pair(kDeskCp, x, cfg);
    CHECK(std::fabs(mc.L_hat - cl.L(x)) <= 3.0 * mc.se_L);
    CHECK(std::fabs(mc.G_hat - cl.G(x)) <= 3.0 * mc.se_G);
  }
}

TEST_CASE("deep level estimates vanish") {
  McConfig cfg;
  cfg.n_paths = 2000;
  cfg.seed = 6;
  cfg.horizon = 5.0;
  const LaplaceEstimate mc = mc_pair(kDeskCp, -1e6, cfg);
  CHECK(mc.L_hat == 0.0);
  CHECK(mc.G_hat == 0.0);
}

TEST_CASE("transforms are nondecreasing in x on a matched-seed ladder") {
  McConfig cfg;
  cfg.n_paths = 30000;
  cfg.seed = 8;
  for (const ModelSpec* m : {&kUnitBm, &kDeskCp}) {
    double prev_l = -1.0, prev_g = -1.0;
    for (double x : {-2.0, -1.0, -0.5, -0.25, -0.125}) {
      const LaplaceEstimate e = mc_pair(*m, x, cfg);
      CHECK(e.L_hat >= prev_l);
      CHECK(e.G_hat >= prev_g);
      prev_l = e.L_hat;
      prev_g = e.G_hat;
    }
  }
}

TEST_CASE("assumption-failing models are refused") {
  McConfig cfg;
  CHECK_THROWS_AS(mc_pair(ModelSpec::brownian(0.2, 0.3, 0.05, 0.0, 1.0), -1.0, cfg),
                  AssumptionError);
}

TEST_CASE("richardson extrapolation recovers polynomial limits") {
  std::vector<double> xs, ys;
  for (int k = 0; k < 6; ++k) {
    const double x = -0.4 * std::pow(2.0, -k);
    xs.push_back(x);
    ys.push_back(3.0 + 2.0 * x - 5.0 * x * x);  // limit 3
  }
  const Extrapolation ext = richardson_limit(xs, ys, 1e-10);
  CHECK(ext.converged);
  CHECK(ext.value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("left limits: analytic branch for the desk diffusion") {
  LimitConfig cfg;
  const LeftLimitEstimate est = left_limits(kDesk, cfg, 1);
  CHECK(est.analytic);
  CHECK(est.converged);
  CHECK(est.continuous_at_zero);
  const double gamma = brownian_gamma(kDesk);
  CHECK(est.ratio_limit == doctest::Approx(gamma / (gamma + 1.0)).epsilon(1e-14));
  CHECK(est.ratio_limit == doctest::Approx(0.51316701949486).epsilon(1e-10));
  CHECK(est.L_left_deriv == doctest::Approx(gamma).epsilon(1e-14));
  CHECK(est.G_left_deriv == doctest::Approx(gamma + 1.0).epsilon(1e-14));
  CHECK(est.ratio_limit > 0.0);
  CHECK(est.ratio_limit < 1.0);
}

TEST_CASE("left limits: the Monte Carlo ladder reproduces the analytic limits") {
  LimitConfig cfg;
  cfg.force_monte_carlo = true;
  cfg.paths_per_level = 200000;
  cfg.rel_tol = 0.02;
  const LeftLimitEstimate est = left_limits(kDesk, cfg, 2);
  CHECK(!est.analytic);
  CHECK(est.continuous_at_zero);
  const double gamma = brownian_gamma(kDesk);
  const double exact = gamma / (gamma + 1.0);
  CHECK(std::fabs(est.ratio_limit - exact) <= std::max(3.0 * est.se_ratio, 0.02 * exact));
  CHECK(std::fabs(est.L_left_deriv - gamma) <=
        std::max(3.0 * est.se_L_deriv, 0.05 * gamma));
  CHECK(std::fabs(est.G_left_deriv - (gamma + 1.0)) <=
        std::max(3.0 * est.se_G_deriv, 0.05 * (gamma + 1.0)));
  CHECK(est.ladder.size() == static_cast<std::size_t>(cfg.ladder_levels));
}

TEST_CASE("left limits: discontinuous case extrapolates to the closed form") {
  const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
  LimitConfig cfg;
  cfg.paths_per_level = 200000;
  const LeftLimitEstimate est = left_limits(kDeskCp, cfg, 3);
  CHECK(!est.continuous_at_zero);
  CHECK(est.converged);
  CHECK(std::isnan(est.L_left_deriv));
  CHECK(std::fabs(est.L_left_limit - cl.L0) <= std::max(3.0 * est.se_L_limit, 2e-3));
  CHECK(std::fabs(est.G_left_limit - cl.G0) <= std::max(3.0 * est.se_G_limit, 2e-3));
  CHECK(std::fabs(est.ratio_limit - (1.0 - cl.L0) / (1.0 - cl.G0)) <=
        std::max(3.0 * est.se_ratio, 2e-3));
  CHECK(est.ratio_limit > 0.0);
  CHECK(est.ratio_limit < 1.0);
  // converged means the final extrapolants moved less than the tolerance
  REQUIRE(est.ratio_extrapolants.size() >= 2);
}

TEST_CASE("discontinuity witness: limits stay bounded away from 1 near 0-") {
  // Passage needs a jump even for tiny |x|, so L stays clear of 1 and shallow
  // levels agree to within a few percent of the gap 1 - L.
  McConfig cfg;
  cfg.n_paths = 100000;
  cfg.seed = 9;
  const LaplaceEstimate wide = mc_pair(kDeskCp, -0.01, cfg);
  const LaplaceEstimate tight = mc_pair(kDeskCp, -0.001, cfg);
  CHECK(1.0 - wide.L_hat > 30.0 * wide.se_L);
  CHECK(1.0 - tight.L_hat > 30.0 * tight.se_L);
  CHECK(std::fabs(wide.L_hat - tight.L_hat) <= 0.05 * (1.0 - tight.L_hat));
}

TEST_CASE("non-convergent extrapolation is reported, not hidden") {
  LimitConfig cfg;
  cfg.paths_per_level = 500;  // noise floor far above the tolerance
  cfg.rel_tol = 1e-9;
  const LeftLimitEstimate est = left_limits(kDeskCp, cfg, 10);
  CHECK(!est.converged);
}

TEST_SUITE_END();
