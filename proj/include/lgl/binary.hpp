#pragma once

// Equilibrium procedures for binary-action c/n-large games.
//
// Each procedure talks to the game only through a MixedOracle, so the same
// code runs against exact expectations or the sampling oracle. Players update
// simultaneously from one payoff snapshot per round, and each player's rule
// reads only its own row of that snapshot.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lgl/oracle.hpp"
#include "lgl/plane.hpp"
#include "lgl/report.hpp"

namespace lgl {

struct Run {
  MixedProfile profile;
  RunReport report;
};

inline constexpr double kOneStepThreshold = 0.085145784487323817;  // 2 - sqrt(11/3)
inline constexpr double kOneStepShift = 0.22871355387816905;       // sqrt(11/48) - 1/4

// Regret level above which a player on the plane counts as "bad".
inline constexpr double kBadRegret = 0.12;

namespace detail {

inline void require_binary(const MixedOracle& oracle, const char* who) {
  if (oracle.game().num_actions() != 2) {
    throw std::invalid_argument(std::string(who) + " needs a binary-action game");
  }
}

inline Run finish(MixedOracle& oracle, MixedProfile profile, RunReport report) {
  report.pure_queries = oracle.session().pure_queries();
  report.qm_calls = oracle.session().qm_calls();
  finalize_report(report, oracle.game(), profile);
  return {std::move(profile), std::move(report)};
}

// Moves best-response mass by `amount`, keeping p in [0,1].
inline double shift_best_response(const StrategyPayoffState& s, double amount) {
  const double target = std::clamp(s.best_response_mass() + amount, 0.0, 1.0);
  return s.prefers_one() ? target : 1.0 - target;
}

}  // namespace detail

inline MixedProfile uniform_profile(int n) { return MixedProfile::uniform(n, 2); }

// One discrete step of the plane dynamic for a single player.
//  - below the band: raise best-response mass by `step`
//  - above the band: lower it by `step`
//  - inside: p += (dv1 - dv0)/2, which leaves s . n unchanged
inline double un_update(const StrategyPayoffState& s, double dv1, double dv0, double band,
                        double step) {
  const double r = plane_residual(s);
  if (r < -band) return detail::shift_best_response(s, step);
  if (r > band) return detail::shift_best_response(s, -step);
  return std::clamp(s.p + 0.5 * (dv1 - dv0), 0.0, 1.0);
}

// Same dynamic aimed at P_gamma = {p* = min(1/2 + D/(2c), 1)}. On the
// saturated part of P_gamma the player heads for its pure best response.
inline double ucn_gamma_update(const StrategyPayoffState& s, double dv1, double dv0, double band,
                               double step, double c) {
  const double r = gamma_residual(s, c);
  if (r < -band) return detail::shift_best_response(s, step);
  if (r > band) return detail::shift_best_response(s, -step);
  if (0.5 + s.discrepancy() / (2.0 * c) >= 1.0) return detail::shift_best_response(s, step);
  return std::clamp(s.p + (dv1 - dv0) / (2.0 * c), 0.0, 1.0);
}

inline Run uniform_run(MixedOracle& oracle) {
  detail::require_binary(oracle, "uniform");
  RunReport report;
  report.algorithm = "uniform";
  return detail::finish(oracle, uniform_profile(oracle.game().num_players()), std::move(report));
}

inline Run one_step(MixedOracle& oracle, double threshold = kOneStepThreshold,
                    double shift = kOneStepShift) {
  detail::require_binary(oracle, "one_step");
  const int n = oracle.game().num_players();
  MixedProfile p = uniform_profile(n);
  const PayoffTable t = oracle.query(p);
  for (int i = 0; i < n; ++i) {
    const double lead = t.at(i, 1) - t.at(i, 0);
    if (lead > threshold) {
      p.set_binary(i, 0.5 + shift);
    } else if (-lead > threshold) {
      p.set_binary(i, 0.5 - shift);
    }
  }
  RunReport report;
  report.algorithm = "one_step";
  report.params = {{"threshold", threshold}, {"shift", shift}};
  report.rounds = 1;
  return detail::finish(oracle, std::move(p), std::move(report));
}

inline Run two_step(MixedOracle& oracle) {
  detail::require_binary(oracle, "two_step");
  const int n = oracle.game().num_players();
  const MixedProfile start = uniform_profile(n);
  const PayoffTable first = oracle.query(start);

  MixedProfile shifted(n, 2);
  std::vector<int> first_choice(n);
  for (int i = 0; i < n; ++i) {
    first_choice[i] = first.best_response(i);
    shifted.set_binary(i, first_choice[i] == 1 ? 0.75 : 0.25);
  }
  const PayoffTable second = oracle.query(shifted);

  MixedProfile out = shifted;
  int reverted = 0;
  for (int i = 0; i < n; ++i) {
    if (second.best_response(i) != first_choice[i]) {
      out.set_binary(i, 0.5);
      ++reverted;
    }
  }
  RunReport report;
  report.algorithm = "two_step";
  report.params = {{"reverted", reverted}};
  report.rounds = 2;
  return detail::finish(oracle, std::move(out), std::move(report));
}

namespace detail {

// Shared driver for UN and its P_gamma variant. `update(state, dv1, dv0)`
// returns the player's next probability of action 1.
template <typename Update>
struct PlaneRunner {
  MixedOracle& oracle;
  double beta;
  double delta;
  MixedProfile p;
  PayoffTable prev;
  int rounds = 0;

  PlaneRunner(MixedOracle& o, double accuracy, double confidence)
      : oracle(o), beta(accuracy), delta(confidence), p(uniform_profile(o.game().num_players())) {
    prev = oracle.query(p, beta, delta);
  }

  PayoffTable observe() { return oracle.query(p, beta, delta); }

  void round(const PayoffTable& cur, Update& update) {
    MixedProfile next = p;
    for (int i = 0; i < p.num_players(); ++i) {
      const StrategyPayoffState s = strategy_payoff_state(cur, p, i);
      next.set_binary(i, update(i, s, cur.at(i, 1) - prev.at(i, 1), cur.at(i, 0) - prev.at(i, 0)));
    }
    prev = cur;
    p = std::move(next);
    ++rounds;
  }

  void run(int count, Update& update) {
    for (int t = 0; t < count; ++t) round(observe(), update);
  }
};

}  // namespace detail

// UN(alpha, eta): completely uncoupled dynamic converging to the band
// P^lambda, lambda = (sqrt(1 + 8 alpha) - 1)/2. Sampled queries use accuracy
// lambda/4 and confidence eta/N per round.
inline Run un(MixedOracle& oracle, const UNParams& params) {
  detail::require_binary(oracle, "un");
  const double band = params.lambda() / 4.0;
  const double step = params.step();
  const int rounds = params.rounds();
  auto update = [&](int, const StrategyPayoffState& s, double dv1, double dv0) {
    return un_update(s, dv1, dv0, band, step);
  };
  detail::PlaneRunner<decltype(update)> runner(oracle, step, params.eta / rounds);
  runner.run(rounds, update);

  RunReport report;
  report.algorithm = "un";
  report.params = {{"alpha", params.alpha}, {"eta", params.eta}, {"lambda", params.lambda()},
                   {"step", step}, {"N", rounds}};
  report.rounds = runner.rounds;
  return detail::finish(oracle, std::move(runner.p), std::move(report));
}

// Pure-query budget of UN in sampling mode: (N+1) ceil(64/beta^3 ln(8nN/eta)),
// where beta is the per-query accuracy (lambda/4 unless pinned).
inline std::uint64_t un_query_count(int n, const UNParams& params, double beta) {
  const int rounds = params.rounds();
  return static_cast<std::uint64_t>(rounds + 1) *
         binary_sample_count(n, beta, params.eta / rounds);
}

struct Labeling {
  std::vector<bool> bad;
  double theta = 0.0;
};

// Bad players are those whose (estimated) regret D(1 - p*) is at least 0.12.
inline Labeling label_bad_players(const PayoffTable& table, const MixedProfile& p) {
  Labeling out;
  out.bad.resize(p.num_players());
  int count = 0;
  for (int i = 0; i < p.num_players(); ++i) {
    out.bad[i] = strategy_payoff_state(table, p, i).regret() >= kBadRegret;
    count += out.bad[i];
  }
  out.theta = p.num_players() > 0 ? static_cast<double>(count) / p.num_players() : 0.0;
  return out;
}

// UN followed by the one-bit communication schedule: if more than half the
// players are bad, bad players push toward their best responses for 0.15
// time units while good players keep tracking the plane; then all bad players
// push for 1/220 time units. Time is discretised with UN's step.
inline Run communication_dynamic(MixedOracle& oracle, const UNParams& params) {
  detail::require_binary(oracle, "communication_dynamic");
  const double band = params.lambda() / 4.0;
  const double step = params.step();
  const int un_rounds = params.rounds();
  const int balance_rounds = static_cast<int>(std::ceil(0.15 / step));
  const int final_rounds = static_cast<int>(std::ceil((1.0 / 220.0) / step));

  const Labeling* labels = nullptr;
  bool tracking_only = true;
  auto update = [&](int i, const StrategyPayoffState& s, double dv1, double dv0) {
    if (tracking_only || !labels->bad[i]) return un_update(s, dv1, dv0, band, step);
    return detail::shift_best_response(s, step);
  };
  // Confidence is split over every round the schedule may run.
  const int budget = un_rounds + balance_rounds + final_rounds + 2;
  detail::PlaneRunner<decltype(update)> runner(oracle, step, params.eta / budget);
  runner.run(un_rounds, update);

  PayoffTable snapshot = runner.observe();
  const Labeling first = label_bad_players(snapshot, runner.p);
  const bool balance = first.theta > 0.5;
  if (balance) {
    labels = &first;
    tracking_only = false;
    runner.round(snapshot, update);
    runner.run(balance_rounds - 1, update);
    snapshot = runner.observe();
  }

  const Labeling second = balance ? label_bad_players(snapshot, runner.p) : first;
  int final_bad = 0;
  for (bool b : second.bad) final_bad += b;
  if (final_bad > 0) {
    // Good players hold still while bad players move.
    PayoffTable cur = snapshot;
    for (int t = 0; t < final_rounds; ++t) {
      if (t > 0) cur = runner.observe();
      MixedProfile next = runner.p;
      for (int i = 0; i < next.num_players(); ++i) {
        if (!second.bad[i]) continue;
        next.set_binary(i, detail::shift_best_response(strategy_payoff_state(cur, runner.p, i), step));
      }
      runner.prev = cur;
      runner.p = std::move(next);
      ++runner.rounds;
    }
  }

  RunReport report;
  report.algorithm = "communication";
  report.params = {{"alpha", params.alpha},  {"eta", params.eta},
                   {"lambda", params.lambda()}, {"step", step},
                   {"N", un_rounds},          {"theta", first.theta},
                   {"balanced", balance},     {"final_bad", final_bad}};
  report.rounds = runner.rounds;
  return detail::finish(oracle, std::move(runner.p), std::move(report));
}

// Discretised UCN-gamma for c/n-large binary games. The band half-width is
// chosen so that every state in it has regret at most gamma_regret_bound(c) + alpha.
inline Run ucn_gamma_discrete(MixedOracle& oracle, const UNParams& params, double c) {
  detail::require_binary(oracle, "ucn_gamma_discrete");
  if (!(c > 0.0)) throw std::invalid_argument("ucn_gamma_discrete: c must be positive");
  const double lambda = gamma_band_width_for(c, params.alpha);
  const double band = lambda / 4.0;
  const double step = lambda / 4.0;
  const int rounds = static_cast<int>(std::ceil(2.0 / step));
  auto update = [&](int, const StrategyPayoffState& s, double dv1, double dv0) {
    return ucn_gamma_update(s, dv1, dv0, band, step, c);
  };
  detail::PlaneRunner<decltype(update)> runner(oracle, step, params.eta / rounds);
  runner.run(rounds, update);

  RunReport report;
  report.algorithm = "ucn_gamma";
  report.params = {{"alpha", params.alpha}, {"eta", params.eta}, {"c", c},
                   {"lambda", lambda},       {"step", step},      {"N", rounds}};
  report.rounds = runner.rounds;
  return detail::finish(oracle, std::move(runner.p), std::move(report));
}

}  // namespace lgl
