#pragma once

// Ground-truth verifiers: exact expectations, regret, discrepancy, NE/WSNE
// checks and the largeness scan. Everything else in the library is checked
// against these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "lgl/game.hpp"
#include "lgl/random.hpp"

namespace lgl {

inline constexpr std::uint64_t kMaxJointSupport = std::uint64_t{1} << 24;
inline constexpr double kLargenessTolerance = 1e-12;

inline std::vector<double> eval_pure(const Game& game, const PureProfile& a) {
  game.validate(a);
  std::vector<double> out(game.num_players());
  game.payoffs(a, out);
  return out;
}

namespace detail {

// Calls visit(profile, weight) for every profile of players other than
// `skip` drawn from their supports. profile[skip] is left for the caller.
template <typename Visit>
void for_each_opponent_profile(const MixedProfile& p, int skip, Visit&& visit) {
  const int n = p.num_players();
  const int k = p.num_actions();
  std::vector<std::vector<int>> support(n);
  std::uint64_t joint = 1;
  for (int l = 0; l < n; ++l) {
    if (l == skip) {
      support[l] = {0};
      continue;
    }
    for (int j = 0; j < k; ++j) {
      if (p.at(l, j) > 0.0) support[l].push_back(j);
    }
    joint *= support[l].size();
    if (joint > kMaxJointSupport) {
      throw CapabilityError("joint opponent support exceeds 2^24 profiles");
    }
  }
  PureProfile a(n);
  std::vector<std::size_t> cursor(n, 0);
  for (int l = 0; l < n; ++l) a[l] = support[l][0];
  while (true) {
    double w = 1.0;
    for (int l = 0; l < n; ++l) {
      if (l != skip) w *= p.at(l, a[l]);
    }
    visit(a, w);
    int l = n - 1;
    for (; l >= 0; --l) {
      if (++cursor[l] < support[l].size()) {
        a[l] = support[l][cursor[l]];
        break;
      }
      cursor[l] = 0;
      a[l] = support[l][0];
    }
    if (l < 0) return;
  }
}

}  // namespace detail

// Full enumeration over opponents' joint supports, ignoring any fast path.
inline PayoffTable brute_force_expected_payoffs(const Game& game, const MixedProfile& p) {
  game.validate(p);
  const int n = game.num_players();
  const int k = game.num_actions();
  PayoffTable table(n, k);
  for (int i = 0; i < n; ++i) {
    detail::for_each_opponent_profile(p, i, [&](PureProfile& a, double w) {
      for (int j = 0; j < k; ++j) {
        a[i] = j;
        table.at(i, j) += w * game.payoff(i, a);
      }
    });
  }
  return table;
}

inline PayoffTable expected_payoffs(const Game& game, const MixedProfile& p) {
  if (game.has_fast_expectation()) {
    game.validate(p);
    return game.fast_expected_payoffs(p);
  }
  return brute_force_expected_payoffs(game, p);
}

// E_{a_{-i} ~ p_{-i}}[u_i(j, a_{-i})]
inline double expected_payoff(const Game& game, const MixedProfile& p, int player, int action) {
  game.validate(p);
  if (player < 0 || player >= game.num_players() || action < 0 || action >= game.num_actions()) {
    throw std::invalid_argument("expected_payoff: player or action out of range");
  }
  if (game.has_fast_expectation()) return game.fast_expected_payoff(p, player, action);
  double total = 0.0;
  detail::for_each_opponent_profile(p, player, [&](PureProfile& a, double w) {
    a[player] = action;
    total += w * game.payoff(player, a);
  });
  return total;
}

// Regret of player i given its row of expected payoffs and its strategy.
inline double regret_from_row(std::span<const double> values, std::span<const double> strategy) {
  double best = values[0];
  double current = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    best = std::max(best, values[j]);
    current += strategy[j] * values[j];
  }
  return std::max(0.0, best - current);
}

inline double regret(const Game& game, const MixedProfile& p, int player) {
  std::vector<double> row(game.num_actions());
  for (int j = 0; j < game.num_actions(); ++j) row[j] = expected_payoff(game, p, player, j);
  return regret_from_row(row, p.row(player));
}

inline double discrepancy(const Game& game, const MixedProfile& p, int player) {
  if (game.num_actions() != 2) throw std::invalid_argument("discrepancy needs a binary game");
  return std::abs(expected_payoff(game, p, player, 0) - expected_payoff(game, p, player, 1));
}

struct RegretReport {
  std::vector<double> regrets;
  double max_regret = 0.0;
  // Binary games only; empty otherwise.
  std::vector<double> discrepancies;
  // support_gaps[i][j] = best payoff - u_i(j) for supported j, NaN otherwise.
  std::vector<std::vector<double>> support_gaps;

  int worst_player() const {
    return static_cast<int>(std::max_element(regrets.begin(), regrets.end()) - regrets.begin());
  }
};

inline RegretReport regret_report(const PayoffTable& table, const MixedProfile& p) {
  const int n = p.num_players();
  const int k = p.num_actions();
  RegretReport r;
  r.regrets.resize(n);
  r.support_gaps.assign(n, std::vector<double>(k, std::numeric_limits<double>::quiet_NaN()));
  if (k == 2) r.discrepancies.resize(n);
  for (int i = 0; i < n; ++i) {
    r.regrets[i] = regret_from_row(table.row(i), p.row(i));
    const double best = table.best_value(i);
    for (int j = 0; j < k; ++j) {
      if (p.at(i, j) > kSupportThreshold) r.support_gaps[i][j] = best - table.at(i, j);
    }
    if (k == 2) r.discrepancies[i] = std::abs(table.at(i, 0) - table.at(i, 1));
  }
  r.max_regret = n > 0 ? *std::max_element(r.regrets.begin(), r.regrets.end()) : 0.0;
  return r;
}

inline RegretReport regret_report(const Game& game, const MixedProfile& p) {
  return regret_report(expected_payoffs(game, p), p);
}

struct NeCheck {
  bool ok = false;
  RegretReport report;
};

inline NeCheck is_approx_ne(const Game& game, const MixedProfile& p, double eps) {
  NeCheck out;
  out.report = regret_report(game, p);
  out.ok = out.report.max_regret <= eps;
  return out;
}

inline bool is_wsne(const RegretReport& report, double eps) {
  for (const auto& gaps : report.support_gaps) {
    for (double g : gaps) {
      if (!std::isnan(g) && !(g < eps)) return false;
    }
  }
  return true;
}

inline bool is_wsne(const Game& game, const MixedProfile& p, double eps) {
  return is_wsne(regret_report(game, p), eps);
}

struct LargenessMode {
  enum class Kind { exhaustive, sampled };
  Kind kind = Kind::exhaustive;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;

  static LargenessMode exhaustive() { return {}; }
  static LargenessMode sampled(std::uint64_t trials, std::uint64_t seed = 0) {
    return {Kind::sampled, trials, seed};
  }
};

struct LargenessCheck {
  bool ok = true;
  // Largest |u_i(a_j, a_{-j}) - u_i(a'_j, a_{-j})| seen over i != j.
  double worst_change = 0.0;
  std::uint64_t deviations_checked = 0;
};

inline LargenessCheck check_largeness(const Game& game, double gamma,
                                      LargenessMode mode = LargenessMode::exhaustive()) {
  const int n = game.num_players();
  const int k = game.num_actions();
  LargenessCheck out;
  std::vector<double> base(n);
  std::vector<double> moved(n);
  auto record = [&](int deviator) {
    for (int i = 0; i < n; ++i) {
      if (i == deviator) continue;
      out.worst_change = std::max(out.worst_change, std::abs(base[i] - moved[i]));
      ++out.deviations_checked;
    }
  };

  if (mode.kind == LargenessMode::Kind::exhaustive) {
    const std::uint64_t total = profile_count(n, k);
    if (total > (std::uint64_t{1} << 20)) {
      throw CapabilityError("exhaustive largeness check needs k^n <= 2^20");
    }
    PureProfile a(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t rest = idx;
      for (int l = n - 1; l >= 0; --l) {
        a[l] = static_cast<int>(rest % k);
        rest /= k;
      }
      game.payoffs(a, base);
      for (int dev = 0; dev < n; ++dev) {
        const int original = a[dev];
        // Each unordered pair of actions is visited from its lower member.
        for (int alt = original + 1; alt < k; ++alt) {
          a[dev] = alt;
          game.payoffs(a, moved);
          record(dev);
        }
        a[dev] = original;
      }
    }
  } else {
    Rng rng(mix_seed(mode.seed, 0x1a7e));
    PureProfile a(n);
    for (std::uint64_t t = 0; t < mode.trials; ++t) {
      for (int l = 0; l < n; ++l) a[l] = static_cast<int>(rng() % k);
      const int dev = static_cast<int>(rng() % n);
      const int alt = (a[dev] + 1 + static_cast<int>(rng() % (k - 1))) % k;
      game.payoffs(a, base);
      a[dev] = alt;
      game.payoffs(a, moved);
      record(dev);
    }
  }
  out.ok = out.worst_change <= gamma + kLargenessTolerance;
  return out;
}

// What an uncoupled binary player can see about herself: (v1, v0, p).
struct StrategyPayoffState {
  double v1 = 0.0;
  double v0 = 0.0;
  double p = 0.5;

  double discrepancy() const { return std::abs(v1 - v0); }
  bool prefers_one() const { return v1 >= v0; }
  // Mass on the best response, with action 1 winning ties.
  double best_response_mass() const { return prefers_one() ? p : 1.0 - p; }
  double regret() const { return discrepancy() * (1.0 - best_response_mass()); }
};

inline StrategyPayoffState strategy_payoff_state(const PayoffTable& table, const MixedProfile& p,
                                                 int player) {
  return {table.at(player, 1), table.at(player, 0), p.binary(player)};
}

inline StrategyPayoffState strategy_payoff_state(const Game& game, const MixedProfile& p,
                                                 int player) {
  if (game.num_actions() != 2) {
    throw std::invalid_argument("strategy_payoff_state needs a binary game");
  }
  return {expected_payoff(game, p, player, 1), expected_payoff(game, p, player, 0),
          p.binary(player)};
}

}  // namespace lgl
