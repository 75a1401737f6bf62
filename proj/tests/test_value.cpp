#include <cmath>

#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "optstop/laplace.hpp"
#include "optstop/model.hpp"
#include "optstop/value.hpp"
#include "oracles.hpp"

using namespace optstop;

namespace {

const ModelSpec kDesk = ModelSpec::brownian(0.0, 0.3, 0.05, 0.0, 1.0);
const ModelSpec kDeskCp = ModelSpec::compound_poisson(0.2, 1.0, 2.0, 0.1, 0.0, 1.0);
const double kBc = 0.51316701949486;  // c gamma/(gamma+1) for the desk diffusion

double desk_value(double b, double v) {
  // (c - b)(b/v)^gamma on the continuation branch
  const double gamma = brownian_gamma(kDesk);
  return v <= b ? 1.0 - v : (1.0 - b) * std::pow(b / v, gamma);
}

}  // namespace

TEST_SUITE_BEGIN("value");

TEST_CASE("linear reward and its positive part") {
  CHECK(reward(1.0, kDesk) == 0.0);  // f(c) = 0
  CHECK(reward(0.3, kDesk) == doctest::Approx(0.7));
  CHECK(reward_plus(2.0, kDesk) == 0.0);  // f+(2c) clipped
  CHECK(reward_plus(0.3, kDesk) == doctest::Approx(0.7));
  CHECK(original_reward(0.5, 2.0, kDesk) ==
        doctest::Approx(-0.5 + std::exp(0.0 * 2.0)));
}

TEST_CASE("auxiliary value: stopping branch is exact") {
  McConfig cfg;
  const ValuePoint p = s_b(kDesk, 0.5, 0.3, cfg);
  CHECK(p.value == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(p.se == 0.0);
  CHECK(p.stopped);
  // v tending to 0 recovers c
  CHECK(s_b(kDesk, 0.5, 1e-12, cfg).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("auxiliary value: desk continuation branch") {
  McConfig cfg;
  const ValuePoint p = s_b(kDesk, kBc, 1.0, cfg);
  CHECK(p.value == doctest::Approx(desk_value(kBc, 1.0)).epsilon(1e-12));
  CHECK(p.value == doctest::Approx(0.241).epsilon(2e-3));
  CHECK(!p.stopped);
  const ValuePoint p2 = s_b(kDesk, kBc, 2.0, cfg);
  CHECK(p2.value == doctest::Approx(0.1162).epsilon(2e-3));
}

TEST_CASE("auxiliary value: parameter validation") {
  McConfig cfg;
  CHECK_THROWS_AS(s_b(kDesk, 0.0, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(s_b(kDesk, 1.0, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(s_b(kDesk, 0.5, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("direct simulation: instant stop below the threshold") {
  McConfig cfg;
  cfg.n_paths = 10;
  const ValuePoint p = mc_value(kDesk, 0.5, 0.4, cfg);
  CHECK(p.value == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p.se == 0.0);
  CHECK(p.stopped);
}

TEST_CASE("direct simulation agrees with the closed form at the desk threshold") {
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.seed = 21;
  const ValuePoint p = mc_value(kDesk, kBc, 1.0, cfg);
  CHECK(std::fabs(p.value - desk_value(kBc, 1.0)) <= 3.0 * p.se);
}

TEST_CASE("a vanishing threshold kills the value") {
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.seed = 22;
  const ValuePoint p = mc_value(kDesk, 1e-4, 1.0, cfg);
  CHECK(p.value < 0.01);
  CHECK(p.value >= 0.0);
}

TEST_CASE("representation equals simulation on a (b, v) grid") {
  McConfig rep_cfg, sim_cfg;
  rep_cfg.n_paths = 20000;
  rep_cfg.seed = 100;
  sim_cfg.n_paths = 20000;
  sim_cfg.seed = 200;  // independent seeds by contract

  SUBCASE("diffusion: analytic representation vs direct simulation") {
    for (double b : {0.2, 0.4, 0.6, 0.8}) {
      for (double v : {0.5, 0.9, 1.5, 3.0}) {
        const ValuePoint rep = s_b(kDesk, b, v, rep_cfg);
        const ValuePoint sim = mc_value(kDesk, b, v, sim_cfg);
        const double joint = std::sqrt(rep.se * rep.se + sim.se * sim.se);
        CHECK(std::fabs(rep.value - sim.value) <= std::max(3.0 * joint, 1e-12));
      }
    }
  }

  SUBCASE("pure jump: both routes against the closed form") {
    const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
    for (double b : {0.25, 0.5}) {
      for (double v : {0.8, 2.0}) {
        const ValuePoint rep = s_b(kDeskCp, b, v, rep_cfg);
        const ValuePoint sim = mc_value(kDeskCp, b, v, sim_cfg);
        const double truth = cl.s_b(v, b, kDeskCp.c);
        CHECK(std::fabs(rep.value - truth) <= 3.0 * rep.se);
        CHECK(std::fabs(sim.value - truth) <= 3.0 * sim.se);
      }
    }
  }
}

TEST_CASE("value curve invariants on the desk models") {
  McConfig cfg;
  cfg.n_paths = 30000;
  cfg.seed = 33;
  for (const ModelSpec* m : {&kDesk, &kDeskCp}) {
    const double b = m->family == Family::BrownianDrift ? kBc : 0.3148;
    const ValueCurve curve = value_curve(*m, b, default_value_grid(*m, b), cfg);
    CHECK(curve.points.size() == 64);
    CHECK(curve.remark_mode == (m->family == Family::CompoundPoissonDrift));
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const ValuePoint& p = curve.points[i];
      CHECK(p.value >= -3.0 * p.se);                     // s >= 0
      CHECK(p.value <= m->c + 3.0 * p.se);               // s <= c
      CHECK(p.value + 3.0 * p.se >= reward_plus(p.v, *m));  // dominance
      if (i > 0) {
        const ValuePoint& q = curve.points[i - 1];
        CHECK(p.value <= q.value + 3.0 * std::sqrt(p.se * p.se + q.se * q.se));
      }
    }
  }
}

TEST_CASE("value pastes continuously across the threshold") {
  McConfig cfg;
  cfg.n_paths = 50000;
  cfg.seed = 44;
  const PastingGap bm = pasting_gap(kDesk, kBc, cfg);
  CHECK(bm.ok);
  // jump family: continuity pins the threshold; check at the true B_c
  const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
  const PastingGap cp = pasting_gap(kDeskCp, cl.B_c, cfg);
  CHECK(cp.ok);
}

TEST_CASE("geometric grid spans both branches") {
  const auto grid = default_value_grid(kDesk, kBc);
  CHECK(grid.size() == 64);
  CHECK(grid.front() == doctest::Approx(kBc / 4.0));
  CHECK(grid.back() == doctest::Approx(8.0));
  CHECK(grid.front() < kBc);
  CHECK(grid.back() > kBc);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(geometric_grid(2.0, 1.0, 8), std::invalid_argument);
}

TEST_SUITE_END();
