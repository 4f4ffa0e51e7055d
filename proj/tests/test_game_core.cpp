#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lgl/lgl.hpp"
#include "support.hpp"

using namespace lgl;

namespace {

// u_i = 0.7 on action 1, 0.3 on action 0, for every player.
std::shared_ptr<IndependentGame> seventy_thirty(int n) { return IndependentGame::symmetric(n, {0.3, 0.7}); }

MixedProfile random_profile(int n, int k, std::mt19937_64& rng) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& row : rows) {
    double s = 0.0;
    for (double& x : row) s += (x = u(rng));
    for (double& x : row) x /= s;
  }
  // Renormalise the last entry so rows sum to one within the validation tolerance.
  for (auto& row : rows) {
    double s = 0.0;
    for (int j = 0; j + 1 < k; ++j) s += row[j];
    row[k - 1] = std::max(0.0, 1.0 - s);
  }
  return MixedProfile::from_rows(rows);
}

}  // namespace

TEST(EvalPure, IndependentGame) {
  const auto g = seventy_thirty(2);
  const auto u = eval_pure(*g, {1, 0});
  EXPECT_DOUBLE_EQ(u[0], 0.7);
  EXPECT_DOUBLE_EQ(u[1], 0.3);
}

TEST(EvalPure, ConstantGame) {
  const auto g = IndependentGame::constant(4, 3, 0.5);
  for (double x : eval_pure(*g, {0, 2, 1, 1})) EXPECT_DOUBLE_EQ(x, 0.5);
}

TEST(EvalPure, TensorLookup) {
  // Player 0 most significant: index(a0, a1) = 2 a0 + a1.
  const TensorGame g(2, 2, 1.0, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  const auto u = eval_pure(g, {0, 1});
  EXPECT_DOUBLE_EQ(u[0], 0.2);
  EXPECT_DOUBLE_EQ(u[1], 0.6);
}

TEST(EvalPure, RejectsBadProfile) {
  const auto g = seventy_thirty(3);
  EXPECT_THROW(eval_pure(*g, {0, 1}), std::invalid_argument);
  EXPECT_THROW(eval_pure(*g, {0, 1, 2}), std::invalid_argument);
}

TEST(ExpectedPayoff, IndependentIgnoresOpponents) {
  const auto g = seventy_thirty(3);
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    EXPECT_DOUBLE_EQ(expected_payoff(*g, random_profile(3, 2, rng), 0, 1), 0.7);
  }
}

TEST(ExpectedPayoff, OpponentCoin) {
  // u_1(a) = a_2: player 0 is paid by player 1's action.
  const TensorGame g(2, 2, 1.0, {0.0, 1.0, 0.0, 1.0, 0.5, 0.5, 0.5, 0.5});
  const auto p = MixedProfile::from_binary(std::vector<double>{0.9, 0.25});
  EXPECT_NEAR(expected_payoff(g, p, 0, 0), 0.25, 1e-15);
  EXPECT_NEAR(expected_payoff(g, p, 0, 1), 0.25, 1e-15);
}

TEST(ExpectedPayoff, TinyTensorMatchesMonteCarlo) {
  const auto g = gen_tiny_tensor(3, 3, 1.0, 5);
  std::mt19937_64 rng(2);
  const auto p = random_profile(3, 3, rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double mc = lgl_test::monte_carlo_payoff(*g, p, i, j, 1'000'000, 10 * i + j);
      EXPECT_NEAR(expected_payoff(*g, p, i, j), mc, 3e-3);
    }
  }
}

TEST(ExpectedPayoff, FastPathMatchesEnumeration) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = gen_linear_influence(4, 3, 1.5, seed);
    const auto p = random_profile(4, 3, rng);
    const PayoffTable fast = expected_payoffs(*g, p);
    const PayoffTable brute = brute_force_expected_payoffs(*g, p);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(fast.at(i, j), brute.at(i, j), 1e-12);
        EXPECT_NEAR(fast.at(i, j), lgl_test::enumerated_payoff(*g, p, i, j), 1e-12);
      }
    }
  }
}

TEST(ExpectedPayoff, SupportGuard) {
  // 2^30 joint profiles, no fast path: refused rather than enumerated.
  class Opaque final : public Game {
   public:
    Opaque() : Game(31, 2, 1.0) {}
    std::string family() const override { return "opaque"; }
    double payoff(int, std::span<const int>) const override { return 0.5; }
  } g;
  EXPECT_THROW(expected_payoff(g, MixedProfile::uniform(31, 2), 0, 0), CapabilityError);
  // Pure opponents keep the joint support at one profile.
  EXPECT_DOUBLE_EQ(expected_payoff(g, MixedProfile::pure(PureProfile(31, 1), 2), 0, 0), 0.5);
}

TEST(Regret, IndependentUniform) {
  const auto g = seventy_thirty(4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(regret(*g, MixedProfile::uniform(4, 2), i), 0.2, 1e-15);
}

TEST(Regret, DominantPureIsZero) {
  const auto g = seventy_thirty(4);
  const auto p = MixedProfile::pure({1, 1, 1, 1}, 2);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(regret(*g, p, i), 0.0);
}

TEST(Regret, UniformAtMostHalf) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gen_linear_influence(30, 2, 1.0, seed, WeightTemplate::matching_pennies);
    EXPECT_LE(regret_report(*g, uniform_profile(30)).max_regret, 0.5);
  }
}

TEST(Discrepancy, Examples) {
  EXPECT_NEAR(discrepancy(*seventy_thirty(2), MixedProfile::uniform(2, 2), 0), 0.4, 1e-15);
  EXPECT_EQ(discrepancy(*IndependentGame::constant(3, 2, 0.4), MixedProfile::uniform(3, 2), 1), 0.0);
  EXPECT_THROW(discrepancy(*IndependentGame::constant(3, 3, 0.4), MixedProfile::uniform(3, 3), 1),
               std::invalid_argument);
}

TEST(Discrepancy, RegretIdentityHoldsEverywhere) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_tiny_tensor(3, 2, 1.0 / 3.0, seed);
    const auto p = random_profile(3, 2, rng);
    for (int i = 0; i < 3; ++i) {
      const auto s = strategy_payoff_state(*g, p, i);
      EXPECT_NEAR(regret(*g, p, i), discrepancy(*g, p, i) * (1.0 - s.best_response_mass()), 1e-12);
    }
  }
}

TEST(ApproxNe, Examples) {
  const auto g = seventy_thirty(3);
  EXPECT_TRUE(is_approx_ne(*g, MixedProfile::uniform(3, 2), 0.5).ok);
  EXPECT_TRUE(is_approx_ne(*g, MixedProfile::pure({1, 1, 1}, 2), 0.0).ok);
  const auto fail = is_approx_ne(*g, MixedProfile::uniform(3, 2), 0.1);
  EXPECT_FALSE(fail.ok);
  EXPECT_NEAR(fail.report.max_regret, 0.2, 1e-15);
}

TEST(Wsne, Examples) {
  const auto g = seventy_thirty(3);
  EXPECT_TRUE(is_wsne(*g, MixedProfile::pure({1, 1, 1}, 2), 1e-9));
  EXPECT_FALSE(is_wsne(*g, MixedProfile::uniform(3, 2), 0.3));
  const auto r = regret_report(*g, MixedProfile::uniform(3, 2));
  EXPECT_NEAR(r.support_gaps[0][0], 0.4, 1e-15);
}

TEST(Wsne, ImpliesApproxNe) {
  std::mt19937_64 rng(5);
  int wsne_seen = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = gen_tiny_tensor(3, 3, 0.5, seed);
    // Sparse profiles make well-supported equilibria reasonably common.
    auto p = random_profile(3, 3, rng);
    std::vector<std::vector<double>> rows(3, std::vector<double>(3, 0.0));
    for (int i = 0; i < 3; ++i) {
      const PayoffTable t = expected_payoffs(*g, p);
      rows[i][t.best_response(i)] = 1.0;
    }
    p = MixedProfile::from_rows(rows);
    for (double eps : {0.05, 0.1, 0.2, 0.5}) {
      if (is_wsne(*g, p, eps)) {
        ++wsne_seen;
        EXPECT_TRUE(is_approx_ne(*g, p, eps).ok);
      }
    }
  }
  EXPECT_GT(wsne_seen, 0);
}

TEST(Largeness, IndependentAlwaysLarge) {
  EXPECT_TRUE(check_largeness(*seventy_thirty(4), 0.0).ok);
}

TEST(Largeness, LinearInfluenceExhaustive) {
  for (int n = 2; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto g = gen_linear_influence(n, 2, 1.0, seed);
      EXPECT_TRUE(check_largeness(*g, 1.0 / n).ok) << n;
    }
  }
}

TEST(Largeness, DetectsUnderstatedGamma) {
  // c = 2 with weights flipping fully between 0 and 1: each opponent moves
  // u_i by mu/(n-1) = 1/3 when n = 4, more than the 1/4 a 1/n-large game allows.
  const auto g = gen_linear_influence(4, 2, 2.0, 1, WeightTemplate::matching_pennies);
  const auto check = check_largeness(*g, 0.25);
  EXPECT_FALSE(check.ok);
  EXPECT_NEAR(check.worst_change, 1.0 / 3.0, 1e-12);
}

TEST(Largeness, ExhaustiveGuard) {
  const auto g = gen_linear_influence(21, 2, 1.0, 0);
  EXPECT_THROW(check_largeness(*g, 1.0 / 21), CapabilityError);
  EXPECT_TRUE(check_largeness(*g, 1.0 / 21, LargenessMode::sampled(2000, 3)).ok);
}

TEST(StrategyPayoffState, Examples) {
  const auto s = strategy_payoff_state(*seventy_thirty(2), MixedProfile::uniform(2, 2), 0);
  EXPECT_DOUBLE_EQ(s.v1, 0.7);
  EXPECT_DOUBLE_EQ(s.v0, 0.3);
  EXPECT_DOUBLE_EQ(s.p, 0.5);
  EXPECT_NEAR(s.discrepancy(), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(s.best_response_mass(), 0.5);

  const auto flat = strategy_payoff_state(*IndependentGame::constant(2, 2, 0.3), MixedProfile::uniform(2, 2), 1);
  EXPECT_EQ(flat.discrepancy(), 0.0);

  const StrategyPayoffState pure{1.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(pure.best_response_mass(), 0.5 * (1.0 + pure.discrepancy()));
  EXPECT_DOUBLE_EQ(plane_offset(pure), 0.0);
}

TEST(Properties, LipschitzInOpponents) {
  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 6;
    const double c = 0.5 + 0.25 * (seed % 8);
    const auto g = gen_linear_influence(n, 3, c, seed);
    const double gamma = c / n;
    const auto p = random_profile(n, 3, rng);
    const auto q = random_profile(n, 3, rng);
    for (int i = 0; i < n; ++i) {
      double dist = 0.0;
      for (int l = 0; l < n; ++l) {
        if (l == i) continue;
        for (int j = 0; j < 3; ++j) dist += std::abs(p.at(l, j) - q.at(l, j));
      }
      for (int j = 0; j < 3; ++j) {
        const double diff = std::abs(expected_payoff(*g, p, i, j) - expected_payoff(*g, q, i, j));
        EXPECT_LE(diff, gamma * dist + 1e-9);
      }
    }
  }
}

TEST(Properties, PlaneRegretAtMostOneEighth) {
  double worst = 0.0;
  double argmax = -1.0;
  for (int t = 0; t <= 10000; ++t) {
    const double d = t / 10000.0;
    const double pstar = 0.5 * (1.0 + d);
    const double r = d * (1.0 - pstar);
    EXPECT_LE(r, 0.125 + 1e-15);
    if (r > worst) {
      worst = r;
      argmax = d;
    }
  }
  EXPECT_NEAR(worst, 0.125, 1e-15);
  EXPECT_NEAR(argmax, 0.5, 1e-12);
}

TEST(Profiles, ValidationAndTieBreak) {
  EXPECT_THROW(MixedProfile::from_rows({{0.5, 0.6}}), std::invalid_argument);
  EXPECT_THROW(MixedProfile::from_rows({{-0.1, 1.1}}), std::invalid_argument);
  MixedProfile p(1, 2);
  EXPECT_THROW(p.set_binary(0, 1.5), std::invalid_argument);
  PayoffTable t(1, 3);
  t.at(0, 0) = 0.4;
  t.at(0, 1) = 0.4;
  t.at(0, 2) = 0.1;
  EXPECT_EQ(t.best_response(0), 0);
}

TEST(Serialization, TensorRoundTrip) {
  const auto g = gen_tiny_tensor(3, 2, 0.5, 9);
  const auto back = tensor_game_from_json(json::parse(tensor_game_to_json(*g).dump()));
  EXPECT_EQ(back->payoff_tensor(), g->payoff_tensor());
  EXPECT_EQ(back->largeness_c(), g->largeness_c());
}
