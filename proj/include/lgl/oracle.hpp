#pragma once

// Payoff-query access to a game. An OracleSession counts every pure-profile
// query it issues; mixed-profile payoffs are either estimated by sampling
// pure queries or, as a testing convenience, computed exactly (counted
// separately as Q_M calls).

#include <cmath>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgl/analysis.hpp"
#include "lgl/game.hpp"
#include "lgl/random.hpp"

namespace lgl {

// Interprets u_i(a) as the mean of a Bernoulli utility; every query returns
// a fresh draw.
class StochasticGame {
 public:
  explicit StochasticGame(GamePtr base) : base_(std::move(base)) {
    if (!base_) throw std::invalid_argument("StochasticGame: null base game");
  }

  const Game& base() const { return *base_; }
  const GamePtr& base_ptr() const { return base_; }

  void sample(std::span<const int> a, std::span<double> out, Rng& rng) const {
    base_->payoffs(a, out);
    for (double& x : out) x = unit_uniform(rng) < x ? 1.0 : 0.0;
  }

 private:
  GamePtr base_;
};

// Query budget of the binary sampler: ceil(64/beta^3 * ln(8n/delta)).
inline std::uint64_t binary_sample_count(int n, double beta, double delta) {
  return static_cast<std::uint64_t>(std::ceil(64.0 / (beta * beta * beta) * std::log(8.0 * n / delta)));
}

// k-action sampler budget: ceil(64k^2/beta^3 * ln(8n/delta)).
inline std::uint64_t kaction_sample_count(int n, int k, double beta, double delta) {
  return static_cast<std::uint64_t>(
      std::ceil(64.0 * k * k / (beta * beta * beta) * std::log(8.0 * n / delta)));
}

// (1 - beta/2) p + (beta / 2k) 1: every action keeps mass >= beta/(2k).
inline MixedProfile exploration_mixture(const MixedProfile& p, double beta) {
  MixedProfile out(p.num_players(), p.num_actions());
  const double uniform_mass = beta / (2.0 * p.num_actions());
  for (int i = 0; i < p.num_players(); ++i) {
    for (int j = 0; j < p.num_actions(); ++j) {
      out.at(i, j) = (1.0 - beta / 2.0) * p.at(i, j) + uniform_mass;
    }
  }
  return out;
}

struct MixedEstimate {
  // Cells of actions a player never played in any sample are exactly 0.
  PayoffTable values;
  std::uint64_t samples = 0;
  double beta = 0.0;
  double delta = 0.0;
};

struct OwnPayoff {
  int player = 0;
  double value = 0.0;
};

class OracleSession {
 public:
  OracleSession(const Game& game, std::uint64_t seed, bool uncoupled = false)
      : game_(&game), rng_(mix_seed(seed, 0x0c)), uncoupled_(uncoupled) {}

  OracleSession(const StochasticGame& game, std::uint64_t seed, bool uncoupled = false)
      : game_(&game.base()), stochastic_(&game), rng_(mix_seed(seed, 0x0c)), uncoupled_(uncoupled) {}

  const Game& game() const { return *game_; }
  bool stochastic() const { return stochastic_ != nullptr; }
  bool uncoupled() const { return uncoupled_; }

  std::uint64_t pure_queries() const { return pure_queries_; }
  std::uint64_t qm_calls() const { return qm_calls_; }

  // JSON lines {t, profile, payoffs}, one per pure query. Null disables.
  void set_trace(std::ostream* out) { trace_ = out; }

  // Full payoff vector. Not available in uncoupled mode, where a query may
  // only reveal each player's own payoff.
  std::vector<double> query_pure(const PureProfile& a) {
    if (uncoupled_) {
      throw std::logic_error("query_pure: uncoupled sessions answer through query_uncoupled");
    }
    game_->validate(a);
    std::vector<double> out(game_->num_players());
    issue(a, out);
    return out;
  }

  // One joint query; entry i is delivered to player i only.
  std::vector<OwnPayoff> query_uncoupled(const PureProfile& a) {
    game_->validate(a);
    std::vector<double> out(game_->num_players());
    issue(a, out);
    std::vector<OwnPayoff> replies(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) replies[i] = {static_cast<int>(i), out[i]};
    return replies;
  }

  MixedEstimate sample_mixed_binary(const MixedProfile& p, double beta, double delta) {
    if (game_->num_actions() != 2) {
      throw std::invalid_argument("sample_mixed_binary: game is not binary");
    }
    check_accuracy(beta, delta);
    return sample(p, beta, delta, binary_sample_count(game_->num_players(), beta, delta));
  }

  MixedEstimate sample_mixed_kaction(const MixedProfile& p, double beta, double delta) {
    check_accuracy(beta, delta);
    return sample(p, beta, delta,
                  kaction_sample_count(game_->num_players(), game_->num_actions(), beta, delta));
  }

  // Q_M: exact expectations. Does not touch the pure-query counter.
  PayoffTable exact_mixed(const MixedProfile& p) {
    ++qm_calls_;
    return expected_payoffs(*game_, p);
  }

 private:
  static void check_accuracy(double beta, double delta) {
    if (!(beta > 0.0 && beta < 1.0) || !(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("sampling oracle needs beta, delta in (0,1)");
    }
  }

  void issue(std::span<const int> a, std::span<double> out) {
    if (stochastic_) {
      stochastic_->sample(a, out, rng_);
    } else {
      game_->payoffs(a, out);
    }
    if (trace_) {
      *trace_ << nlohmann::json{{"t", pure_queries_},
                                {"profile", std::vector<int>(a.begin(), a.end())},
                                {"payoffs", std::vector<double>(out.begin(), out.end())}}
                     .dump()
              << '\n';
    }
    ++pure_queries_;
  }

  MixedEstimate sample(const MixedProfile& p, double beta, double delta, std::uint64_t count) {
    game_->validate(p);
    const int n = game_->num_players();
    const int k = game_->num_actions();
    const MixedProfile mixed = exploration_mixture(p, beta);
    PayoffTable sums(n, k);
    std::vector<std::uint64_t> hits(static_cast<std::size_t>(n) * k, 0);
    PureProfile a(n);
    std::vector<double> out(n);
    for (std::uint64_t s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) a[i] = draw_action(rng_, mixed.row(i));
      issue(a, out);
      for (int i = 0; i < n; ++i) {
        sums.at(i, a[i]) += out[i];
        ++hits[static_cast<std::size_t>(i) * k + a[i]];
      }
    }
    MixedEstimate est{PayoffTable(n, k), count, beta, delta};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) {
        const auto h = hits[static_cast<std::size_t>(i) * k + j];
        est.values.at(i, j) = h == 0 ? 0.0 : sums.at(i, j) / static_cast<double>(h);
      }
    }
    return est;
  }

  const Game* game_;
  const StochasticGame* stochastic_ = nullptr;
  Rng rng_;
  bool uncoupled_ = false;
  std::uint64_t pure_queries_ = 0;
  std::uint64_t qm_calls_ = 0;
  std::ostream* trace_ = nullptr;
};

// What the equilibrium procedures see: a mixed-profile payoff oracle that is
// either exact (Q_M) or the sampler Q_{beta,delta}. Binary games use the
// binary sample budget, larger games the k-action one.
class MixedOracle {
 public:
  enum class Mode { exact, sampled };

  static MixedOracle exact(OracleSession& session) { return MixedOracle(session, Mode::exact, 0, 0); }

  static MixedOracle sampled(OracleSession& session, double beta, double delta) {
    return MixedOracle(session, Mode::sampled, beta, delta);
  }

  // Forces this beta on every sampled query, overriding what a procedure
  // requests; used to run the sampling path at affordable accuracies.
  MixedOracle& pin_beta(double beta) {
    pinned_beta_ = beta;
    return *this;
  }

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::exact; }
  OracleSession& session() { return *session_; }
  const Game& game() const { return session_->game(); }
  double beta() const { return pinned_beta_ > 0.0 ? pinned_beta_ : beta_; }
  double delta() const { return delta_; }
  std::uint64_t calls() const { return calls_; }

  PayoffTable query(const MixedProfile& p) { return query(p, beta_, delta_); }

  PayoffTable query(const MixedProfile& p, double beta, double delta) {
    ++calls_;
    if (mode_ == Mode::exact) return session_->exact_mixed(p);
    if (pinned_beta_ > 0.0) beta = pinned_beta_;
    if (game().num_actions() == 2) return session_->sample_mixed_binary(p, beta, delta).values;
    return session_->sample_mixed_kaction(p, beta, delta).values;
  }

 private:
  MixedOracle(OracleSession& session, Mode mode, double beta, double delta)
      : session_(&session), mode_(mode), beta_(beta), delta_(delta) {}

  OracleSession* session_;
  Mode mode_;
  double beta_;
  double delta_;
  double pinned_beta_ = 0.0;
  std::uint64_t calls_ = 0;
};

}  // namespace lgl
