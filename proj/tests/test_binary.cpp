#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgl/lgl.hpp"

using namespace lgl;

namespace {

struct Exact {
  GamePtr game;
  OracleSession session;
  MixedOracle oracle;
  explicit Exact(GamePtr g) : game(std::move(g)), session(*game, 0), oracle(MixedOracle::exact(session)) {}
};

}  // namespace

TEST(UNParams, DerivedQuantities) {
  const UNParams a(0.125, 0.1);
  EXPECT_NEAR(a.lambda(), (std::sqrt(2.0) - 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(a.lambda(), 0.207107, 1e-6);
  EXPECT_NEAR(a.step(), 0.051777, 1e-6);
  EXPECT_EQ(a.rounds(), 39);
  const UNParams b(0.05, 0.1);
  EXPECT_NEAR(b.lambda(), 0.091608, 1e-6);
  EXPECT_NEAR(b.step(), 0.022902, 1e-6);
  EXPECT_EQ(b.rounds(), 88);
  EXPECT_GE(b.rounds(), 8.0 / b.lambda());
  EXPECT_THROW(UNParams(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(UNParams(0.1, 1.0), std::invalid_argument);
}

TEST(Uniform, Profile) {
  const auto p = uniform_profile(3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(p.binary(i), 0.5);
  Exact e(IndependentGame::constant(3, 2, 0.2));
  EXPECT_EQ(uniform_run(e.oracle).report.max_regret, 0.0);
}

TEST(OneStep, Constants) {
  EXPECT_NEAR(kOneStepThreshold, 2.0 - std::sqrt(11.0 / 3.0), 1e-16);
  EXPECT_NEAR(kOneStepShift, std::sqrt(11.0 / 48.0) - 0.25, 1e-16);
  EXPECT_NEAR(kOneStepThreshold, 0.085, 5e-4);
  EXPECT_NEAR(kOneStepShift, 0.229, 5e-4);
}

TEST(OneStep, ConstantGameStaysUniform) {
  Exact e(IndependentGame::constant(5, 2, 0.6));
  const lgl::Run r = one_step(e.oracle);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(r.profile.binary(i), 0.5);
  EXPECT_EQ(r.report.qm_calls, 1u);
}

TEST(OneStep, MovesOnlyDecisivePlayers) {
  // D = 0.05 stays, D = 0.4 moves toward action 1.
  Exact e(std::make_shared<IndependentGame>(std::vector<std::vector<double>>{{0.5, 0.55}, {0.3, 0.7}}));
  const lgl::Run r = one_step(e.oracle);
  EXPECT_EQ(r.profile.binary(0), 0.5);
  EXPECT_NEAR(r.profile.binary(1), 0.5 + kOneStepShift, 1e-15);
}

TEST(OneStep, Bound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Exact e(gen_linear_influence(50, 2, 1.0, seed, WeightTemplate::matching_pennies));
    EXPECT_LE(one_step(e.oracle).report.max_regret, 0.272 + 1e-9);
  }
}

TEST(TwoStep, ConstantGameUsesTieBreak) {
  Exact e(IndependentGame::constant(4, 2, 0.5));
  const lgl::Run r = two_step(e.oracle);
  // Lowest-index tie-break: every player puts 3/4 on action 0.
  for (int i = 0; i < 4; ++i) EXPECT_EQ(r.profile.binary(i), 0.25);
  EXPECT_EQ(r.report.max_regret, 0.0);
  EXPECT_EQ(r.report.rounds, 2);
}

TEST(TwoStep, StrongPreferenceNeverFlips) {
  // D = 0.6 regardless of opponents, so the preference survives the shift.
  for (int n : {2, 7, 20}) {
    std::vector<std::vector<double>> fixed(n, std::vector<double>{0.2, 0.8});
    Exact e(std::make_shared<IndependentGame>(fixed));
    const lgl::Run r = two_step(e.oracle);
    EXPECT_EQ(r.report.params.at("reverted"), 0);
    for (int i = 0; i < n; ++i) EXPECT_EQ(r.profile.binary(i), 0.75);
  }
}

TEST(TwoStep, Bound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Exact e(gen_linear_influence(50, 2, 1.0, seed, WeightTemplate::matching_pennies));
    EXPECT_LE(two_step(e.oracle).report.max_regret, 0.25 + 1e-9);
  }
}

TEST(UN, ExactRunsLandInBand) {
  for (double alpha : {0.05, 0.125}) {
    const UNParams params(alpha, 0.1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (auto w : {WeightTemplate::uniform, WeightTemplate::matching_pennies}) {
        Exact e(gen_linear_influence(100, 2, 1.0, seed, w));
        const lgl::Run r = un(e.oracle, params);
        EXPECT_LE(r.report.max_regret, 0.125 + alpha + 1e-9);
        const auto table = expected_payoffs(*e.game, r.profile);
        for (int i = 0; i < 100; ++i) {
          const auto s = strategy_payoff_state(table, r.profile, i);
          EXPECT_LE(std::abs(plane_offset(s)), params.lambda() + 1e-12);
          EXPECT_LE(s.regret(), band_regret_ceiling(params.lambda()) + 1e-12);
        }
        EXPECT_EQ(r.report.rounds, params.rounds());
        EXPECT_EQ(r.report.qm_calls, static_cast<std::uint64_t>(params.rounds() + 1));
        EXPECT_EQ(r.report.pure_queries, 0u);
      }
    }
  }
}

TEST(UN, IndependentGameReachesPlane) {
  // D = 0.4 fixed: the plane sits at p* = 0.7.
  Exact e(IndependentGame::symmetric(3, {0.3, 0.7}));
  const UNParams params(0.05, 0.1);
  const lgl::Run r = un(e.oracle, params);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.profile.binary(i), 0.7, params.lambda() / 4 + 1e-12);
}

TEST(UN, SamplingQueryCount) {
  const auto g = gen_linear_influence(3, 2, 1.0, 4);
  OracleSession s(*g, 6);
  auto oracle = MixedOracle::sampled(s, 0.5, 0.1);
  oracle.pin_beta(0.6);
  const UNParams params(0.125, 0.1);
  const lgl::Run r = un(oracle, params);
  const auto per_round = static_cast<std::uint64_t>(
      std::ceil(64.0 / (0.6 * 0.6 * 0.6) * std::log(8.0 * 3 * params.rounds() / 0.1)));
  EXPECT_EQ(r.report.pure_queries, static_cast<std::uint64_t>(params.rounds() + 1) * per_round);
  EXPECT_EQ(r.report.pure_queries, un_query_count(3, params, 0.6));
  EXPECT_EQ(r.report.qm_calls, 0u);
}

TEST(UN, UnpinnedSamplingUsesStep) {
  const UNParams params(0.125, 0.1);
  // (N+1)(4096/lambda^3) ln(8nN/eta) with Delta = lambda/4.
  const double lambda = params.lambda();
  const auto expected = static_cast<std::uint64_t>(params.rounds() + 1) *
                        static_cast<std::uint64_t>(std::ceil(4096.0 / (lambda * lambda * lambda) *
                                                             std::log(8.0 * 10 * params.rounds() / 0.1)));
  EXPECT_EQ(un_query_count(10, params, params.step()), expected);
}

TEST(UN, MonotoneApproachWithoutFlips) {
  // Fixed payoffs: no preference flips, so s . n rises until the band.
  const StrategyPayoffState start{0.9, 0.1, 0.5};
  const UNParams params(0.05, 0.1);
  const double band = params.lambda() / 4;
  StrategyPayoffState s = start;
  double last = plane_height(s);
  int steps = 0;
  while (plane_residual(s) < -band && steps < 1000) {
    s.p = un_update(s, 0.0, 0.0, band, params.step());
    EXPECT_GE(plane_height(s), last);
    last = plane_height(s);
    ++steps;
  }
  EXPECT_LE(std::abs(plane_residual(s)), band + params.step());
  EXPECT_LE(steps, params.rounds());
}

TEST(UN, UpdateStaysInUnitInterval) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  for (int t = 0; t < 20000; ++t) {
    const StrategyPayoffState s{u(rng), u(rng), u(rng)};
    const double p = un_update(s, d(rng), d(rng), 0.05, 0.05);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    const double q = ucn_gamma_update(s, d(rng), d(rng), 0.05, 0.05, 0.5 + 3 * u(rng));
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(Plane, StepSafety) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double lambda : {0.01, 0.1, 0.3}) {
    std::uniform_real_distribution<double> w(-lambda, lambda);
    for (int t = 0; t < 5000; ++t) {
      const std::array<double, 3> x{u(rng), u(rng), u(rng)};
      const std::array<double, 3> dx{w(rng), w(rng), w(rng)};
      const std::array<double, 3> moved{x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]};
      EXPECT_LE(std::abs(plane_height(moved) - plane_height(x)), 2 * lambda + 1e-15);
      const std::array<double, 3> payoff_only{x[0] + dx[0], x[1] + dx[1], x[2]};
      EXPECT_LE(std::abs(plane_height(payoff_only) - plane_height(x)), lambda + 1e-15);
    }
  }
}

TEST(Plane, BandRegretCeiling) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double lambda : {0.05, 0.1, 0.2}) {
    double worst = 0.0;
    for (int t = 0; t < 50000; ++t) {
      const StrategyPayoffState s{u(rng), u(rng), u(rng)};
      if (!in_band(s, lambda)) continue;
      worst = std::max(worst, s.regret());
      EXPECT_LE(s.regret(), band_regret_ceiling(lambda) + 1e-12);
    }
    EXPECT_GT(worst, 0.125);
  }
  EXPECT_NEAR(band_regret_ceiling(band_width_for(0.05)), 0.175, 1e-15);
}

TEST(Plane, ResidualMatchesOffset) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const StrategyPayoffState s{u(rng), u(rng), u(rng)};
    EXPECT_NEAR(std::abs(plane_residual(s)), std::abs(plane_offset(s)), 1e-15);
  }
}

TEST(Communication, BadPlayerBoundary) {
  // On P with p* = 0.7 the discrepancy is 0.4 and regret exactly 0.12.
  PayoffTable t(1, 2);
  t.at(0, 1) = 0.7;
  t.at(0, 0) = 0.3;
  const auto p = MixedProfile::from_binary(std::vector<double>{0.7});
  EXPECT_NEAR(strategy_payoff_state(t, p, 0).regret(), 0.12, 1e-15);
  t.at(0, 1) = 0.70000001;
  EXPECT_TRUE(label_bad_players(t, p).bad[0]);
}

TEST(Communication, NoBadPlayersMatchesUN) {
  const UNParams params(0.05, 0.1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Exact a(gen_linear_influence(60, 2, 1.0, seed));
    Exact b(gen_linear_influence(60, 2, 1.0, seed));
    const lgl::Run plain = un(a.oracle, params);
    const lgl::Run comm = communication_dynamic(b.oracle, params);
    if (comm.report.params.at("final_bad") == 0 && comm.report.params.at("balanced") == false) {
      EXPECT_EQ(plain.profile, comm.profile);
    }
  }
}

TEST(Communication, BalancingHelpsWhenMostAreBad) {
  // D = 0.5 for everyone: UN parks every player near p* = 0.75, all bad.
  const UNParams params(0.05, 0.1);
  Exact a(IndependentGame::symmetric(10, {0.25, 0.75}));
  Exact b(IndependentGame::symmetric(10, {0.25, 0.75}));
  const lgl::Run plain = un(a.oracle, params);
  const lgl::Run comm = communication_dynamic(b.oracle, params);
  EXPECT_TRUE(comm.report.params.at("balanced").get<bool>());
  EXPECT_GT(comm.report.params.at("theta").get<double>(), 0.5);
  EXPECT_LT(comm.report.max_regret, plain.report.max_regret);
  EXPECT_LE(comm.report.max_regret, 137.0 / 1100.0 + params.alpha + 1e-9);
}

TEST(Communication, Bound) {
  const UNParams params(0.05, 0.1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Exact e(gen_linear_influence(100, 2, 1.0, seed, WeightTemplate::matching_pennies));
    EXPECT_LE(communication_dynamic(e.oracle, params).report.max_regret, 137.0 / 1100.0 + 0.05 + 1e-9);
  }
}

TEST(UCNGamma, ReducesToUNAtCOne) {
  const UNParams params(0.1, 0.1);
  EXPECT_NEAR(gamma_band_width_for(1.0, 0.1), params.lambda(), 1e-15);
  EXPECT_DOUBLE_EQ(gamma_target(0.4, 1.0), 0.7);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Exact a(gen_linear_influence(40, 2, 1.0, seed));
    Exact b(gen_linear_influence(40, 2, 1.0, seed));
    EXPECT_EQ(un(a.oracle, params).profile, ucn_gamma_discrete(b.oracle, params, 1.0).profile);
  }
}

TEST(UCNGamma, BoundCasesAgreeAtTwo) {
  EXPECT_DOUBLE_EQ(gamma_regret_bound(2.0), 0.25);
  EXPECT_DOUBLE_EQ(0.5 - 0.5 / 2.0, 0.25);
  EXPECT_DOUBLE_EQ(gamma_regret_bound(4.0), 0.375);
  EXPECT_DOUBLE_EQ(gamma_regret_bound(0.5), 0.0625);
}

TEST(UCNGamma, BandCeilingWithinBound) {
  for (double c : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0}) {
    for (double alpha : {0.01, 0.05, 0.125}) {
      const double w = gamma_band_width_for(c, alpha);
      EXPECT_GT(w, 0.0);
      EXPECT_LE(gamma_band_regret_ceiling(c, w), gamma_regret_bound(c) + alpha + 1e-12);
      // Brute-force check of the ceiling over (D, p*) in the band.
      double worst = 0.0;
      for (int a = 0; a <= 400; ++a) {
        const double d = std::min(c, 1.0) * a / 400.0;
        const double pstar = std::max(0.0, gamma_target(d, c) - w);
        worst = std::max(worst, d * (1.0 - pstar));
      }
      EXPECT_LE(worst, gamma_band_regret_ceiling(c, w) + 1e-12);
    }
  }
}

TEST(UCNGamma, ExactRunsRespectBound) {
  const UNParams params(0.05, 0.1);
  for (double c : {0.5, 2.0, 4.0}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Exact e(gen_linear_influence(100, 2, c, seed, WeightTemplate::matching_pennies));
      const lgl::Run r = ucn_gamma_discrete(e.oracle, params, c);
      EXPECT_LE(r.report.max_regret, gamma_regret_bound(c) + params.alpha + 1e-9) << c;
    }
  }
}

TEST(UCNGamma, SaturatedPlayersGoPure) {
  // D = 0.9 >= c = 0.25: target p* = 1, so the result is a c-WSNE for that player.
  const double c = 0.25;
  Exact e(std::make_shared<IndependentGame>(
      std::vector<std::vector<double>>{{0.05, 0.95}, {0.6, 0.4}, {0.5, 0.5}}, c));
  const lgl::Run r = ucn_gamma_discrete(e.oracle, UNParams(0.05, 0.1), c);
  EXPECT_EQ(r.profile.binary(0), 1.0);
  const auto report = regret_report(*e.game, r.profile);
  for (int i = 0; i < 3; ++i) {
    if (report.discrepancies[i] >= c) {
      const auto s = strategy_payoff_state(*e.game, r.profile, i);
      EXPECT_EQ(s.best_response_mass(), 1.0);
    }
  }
  EXPECT_TRUE(is_wsne(report, c + 1e-9));
}
