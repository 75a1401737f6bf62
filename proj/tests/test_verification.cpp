#include <cmath>

#include <initializer_list>
#include <stdexcept>

#include <doctest.h>

#include "optstop/laplace.hpp"
#include "optstop/model.hpp"
#include "optstop/value.hpp"
#include "optstop/verify.hpp"
#include "oracles.hpp"

using namespace optstop;

namespace {

const ModelSpec kDesk = ModelSpec::brownian(0.0, 0.3, 0.05, 0.0, 1.0);
const ModelSpec kDeskCp = ModelSpec::compound_poisson(0.2, 1.0, 2.0, 0.1, 0.0, 1.0);
const double kBc = 0.51316701949486;

}  // namespace

TEST_SUITE_BEGIN("verification");

TEST_CASE("sweep: plateau contains the analytic threshold") {
  const SweepResult sweep = sweep_thresholds(kDesk, 1.0, 33, 20000, 51);
  CHECK(sweep.b_grid.size() == 33);
  CHECK(sweep.b_grid.front() == doctest::Approx(0.02));
  CHECK(sweep.b_grid.back() == doctest::Approx(0.98));
  CHECK(sweep.in_plateau(sweep.argmax_b));
  CHECK(sweep.in_plateau(kBc));
  CHECK(std::fabs(sweep.argmax_b - kBc) <= 2.0 * sweep.grid_step());
  CHECK_THROWS_AS(sweep_thresholds(kDesk, 1.0, 8, 1000, 1), std::invalid_argument);
}

TEST_CASE("sweep: deep-in-the-money start stops instantly for most thresholds") {
  const double v = 0.01;  // below the whole b grid
  const SweepResult sweep = sweep_thresholds(kDesk, v, 33, 2000, 52);
  for (std::size_t i = 0; i < sweep.b_grid.size(); ++i) {
    CHECK(sweep.values[i] == doctest::Approx(kDesk.c - v).epsilon(1e-12));
    CHECK(sweep.ses[i] == 0.0);
  }
  CHECK(sweep.plateau_hi - sweep.plateau_lo == doctest::Approx(0.96));
}

TEST_CASE("sweep: pure-jump plateau contains the closed-form threshold") {
  const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
  const SweepResult sweep = sweep_thresholds(kDeskCp, 1.0, 33, 20000, 53);
  CHECK(sweep.in_plateau(cl.B_c));
}

TEST_CASE("one-step check: degenerate step is an exact equality") {
  const ValueFn s_eval = make_value_evaluator(kDesk, kBc, 8.0, {});
  const double starts[] = {0.2, 1.0, 2.0};
  const OneStepReport rep = supermartingale_check(kDesk, s_eval, starts, 0.0, 100, 54);
  for (const OneStepRow& row : rep.rows) {
    CHECK(row.lhs == row.s_v);
    CHECK(row.deficit == 0.0);
    CHECK(row.inequality_ok);
  }
}

TEST_CASE("one-step check on the desk diffusion") {
  const ValueFn s_eval = make_value_evaluator(kDesk, kBc, 8.0, {});
  const double starts[] = {kBc / 4.0, kBc, 2.0};
  const OneStepReport rep = supermartingale_check(kDesk, s_eval, starts, 0.1, 100000, 55);
  CHECK(rep.all_ok);
  // strict drop deep in the stopping region (discounting bites immediately)
  CHECK(rep.rows[0].deficit > 3.0 * rep.rows[0].joint_se);
  // near-martingale far in the continuation region
  CHECK(std::fabs(rep.rows[2].deficit) <= 3.0 * rep.rows[2].joint_se);
}

TEST_CASE("interpolated evaluator tracks the closed form for the jump model") {
  const test::CramerLundberg cl = test::cramer_lundberg(kDeskCp);
  McConfig cfg;
  cfg.n_paths = 50000;
  cfg.seed = 56;
  const ValueFn s_eval = make_value_evaluator(kDeskCp, cl.B_c, 8.0, cfg);
  for (double v : {0.1, 0.4, 0.9, 1.7, 3.3, 6.5}) {
    const ValuePoint p = s_eval(v);
    CHECK(std::fabs(p.value - cl.s_b(v, cl.B_c, kDeskCp.c)) <=
          std::max(3.0 * p.se, 3e-3));
  }
}

TEST_CASE("realization: starting inside the stopping region") {
  const RealizationStats stats = stopping_time_realization(kDesk, kBc, 0.3, 100, 0.01, 57);
  CHECK(stats.mean_payoff == doctest::Approx(kDesk.c - 0.3).epsilon(1e-15));
  CHECK(stats.se == 0.0);
  CHECK(stats.hit_fraction == 1.0);
}

TEST_CASE("realization reproduces the desk value") {
  const RealizationStats stats =
      stopping_time_realization(kDesk, kBc, 1.0, 20000, 0.02, 58);
  const double truth = (kDesk.c - kBc) * std::pow(kBc, brownian_gamma(kDesk));
  CHECK(std::fabs(stats.mean_payoff - truth) <= 3.0 * stats.se + 5e-4);
  // both payoff formulations coincide pathwise up to rounding
  CHECK(stats.max_formulation_gap < 1e-12);
}

TEST_CASE("realization with a growing boundary (m > 0)") {
  const ModelSpec grow = ModelSpec::brownian(0.0, 0.3, 0.05, 0.02, 1.0);
  const double gamma = brownian_gamma(grow);
  const double b = gamma / (gamma + 1.0);
  const double truth = (grow.c - b) * std::pow(b, gamma);  // s(1) on the adjusted scale
  const RealizationStats stats = stopping_time_realization(grow, b, 1.0, 20000, 0.02, 59);
  CHECK(std::fabs(stats.mean_payoff - truth) <= 3.0 * stats.se + 5e-4);
  CHECK(stats.max_formulation_gap < 1e-12);
}

TEST_CASE("realization samples are deterministic and ordered") {
  const auto a = realization_samples(kDesk, kBc, 1.0, 500, 0.05, 60);
  const auto b = realization_samples(kDesk, kBc, 1.0, 500, 0.05, 60);
  REQUIRE(a.size() == 500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tau == b[i].tau);
    CHECK(a[i].payoff == b[i].payoff);
  }
}

TEST_CASE("full verification passes on the desk diffusion") {
  VerifyConfig cfg;
  cfg.sweep_grid = 33;
  cfg.sweep_paths = 20000;
  cfg.sweep_v_multipliers = {1.0, 2.0};
  cfg.value_points = 32;
  cfg.value_paths = 20000;
  cfg.realization_paths = 10000;
  cfg.onestep_paths = 30000;
  const VerificationOutcome outcome = run_full_verification(kDesk, cfg, 61);
  for (const CheckLine& line : outcome.checks) {
    INFO(line.name, ": ", line.detail);
    CHECK(line.passed);
  }
  CHECK(outcome.all_passed);
  CHECK(outcome.sweep.b_grid.size() == 33);
  CHECK(!outcome.curve.points.empty());
}

TEST_SUITE_END();
