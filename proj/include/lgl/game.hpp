#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgl/profile.hpp"

namespace lgl {

// An n-player, k-action game with payoffs in [0,1] and declared largeness
// gamma = c/n. Implementations are immutable after construction.
class Game {
 public:
  Game(int num_players, int num_actions, double largeness_c)
      : n_(num_players), k_(num_actions), c_(largeness_c) {
    if (num_players < 1) throw std::invalid_argument("Game: need at least one player");
    if (num_actions < 2) throw std::invalid_argument("Game: need at least two actions");
    if (!(largeness_c >= 0.0)) throw std::invalid_argument("Game: largeness c must be >= 0");
  }
  virtual ~Game() = default;

  int num_players() const { return n_; }
  int num_actions() const { return k_; }
  double largeness_c() const { return c_; }
  double gamma() const { return c_ / n_; }

  virtual std::string family() const = 0;

  // u_i(a). `a` has already been validated by the caller.
  virtual double payoff(int player, std::span<const int> actions) const = 0;

  // All n payoffs at once; families override when that is cheaper.
  virtual void payoffs(std::span<const int> actions, std::span<double> out) const {
    for (int i = 0; i < n_; ++i) out[i] = payoff(i, actions);
  }

  // Multilinear families with a closed-form expectation override these.
  virtual bool has_fast_expectation() const { return false; }
  virtual PayoffTable fast_expected_payoffs(const MixedProfile&) const {
    throw CapabilityError(family() + ": no closed-form expectation");
  }
  virtual double fast_expected_payoff(const MixedProfile& p, int player, int action) const {
    return fast_expected_payoffs(p).at(player, action);
  }

  void validate(std::span<const int> actions) const {
    if (static_cast<int>(actions.size()) != n_) {
      throw std::invalid_argument("profile has " + std::to_string(actions.size()) +
                                  " entries, game has " + std::to_string(n_) + " players");
    }
    for (int a : actions) {
      if (a < 0 || a >= k_) throw std::invalid_argument("action index out of range");
    }
  }

  void validate(const MixedProfile& p) const {
    if (p.num_players() != n_ || p.num_actions() != k_) {
      throw std::invalid_argument("mixed profile shape does not match the game");
    }
    p.validate();
  }

 private:
  int n_;
  int k_;
  double c_;
};

using GamePtr = std::shared_ptr<const Game>;

// Number of pure profiles k^n, saturating at UINT64_MAX.
inline std::uint64_t profile_count(int num_players, int num_actions) {
  std::uint64_t total = 1;
  for (int i = 0; i < num_players; ++i) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(num_actions)) return UINT64_MAX;
    total *= static_cast<std::uint64_t>(num_actions);
  }
  return total;
}

// Explicit payoff tensor of shape [n, k, ..., k], row-major with player 0's
// action most significant.
class TensorGame final : public Game {
 public:
  static constexpr std::uint64_t kMaxProfiles = 1u << 20;

  TensorGame(int num_players, int num_actions, double largeness_c, std::vector<double> payoffs)
      : Game(num_players, num_actions, largeness_c), payoffs_(std::move(payoffs)) {
    const std::uint64_t profiles = profile_count(num_players, num_actions);
    if (profiles > kMaxProfiles) throw std::invalid_argument("TensorGame: k^n too large");
    stride_ = profiles;
    if (payoffs_.size() != static_cast<std::size_t>(num_players) * profiles) {
      throw std::invalid_argument("TensorGame: expected n*k^n payoff entries, got " +
                                  std::to_string(payoffs_.size()));
    }
    for (double v : payoffs_) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("TensorGame: payoff outside [0,1]");
    }
  }

  std::string family() const override { return "tensor"; }

  double payoff(int player, std::span<const int> actions) const override {
    return payoffs_[static_cast<std::size_t>(player) * stride_ + flat_index(actions)];
  }

  std::uint64_t flat_index(std::span<const int> actions) const {
    std::uint64_t idx = 0;
    for (int a : actions) idx = idx * num_actions() + a;
    return idx;
  }

  const std::vector<double>& payoff_tensor() const { return payoffs_; }

 private:
  std::vector<double> payoffs_;
  std::uint64_t stride_ = 0;
};

// u_i(a) = values[i][a_i]; no cross-player influence at all.
class IndependentGame final : public Game {
 public:
  IndependentGame(std::vector<std::vector<double>> values, double largeness_c = 1.0)
      : Game(static_cast<int>(values.size()),
             values.empty() ? 0 : static_cast<int>(values[0].size()), largeness_c),
        values_(std::move(values)) {
    for (const auto& row : values_) {
      if (static_cast<int>(row.size()) != num_actions()) {
        throw std::invalid_argument("IndependentGame: ragged payoff rows");
      }
      for (double v : row) {
        if (!(v >= 0.0 && v <= 1.0)) {
          throw std::invalid_argument("IndependentGame: payoff outside [0,1]");
        }
      }
    }
  }

  // Every player gets action_values[j] for playing j.
  static std::shared_ptr<IndependentGame> symmetric(int num_players,
                                                    std::vector<double> action_values,
                                                    double largeness_c = 1.0) {
    return std::make_shared<IndependentGame>(
        std::vector<std::vector<double>>(num_players, std::move(action_values)), largeness_c);
  }

  static std::shared_ptr<IndependentGame> constant(int num_players, int num_actions,
                                                   double value, double largeness_c = 1.0) {
    return symmetric(num_players, std::vector<double>(num_actions, value), largeness_c);
  }

  std::string family() const override { return "independent"; }

  double payoff(int player, std::span<const int> actions) const override {
    return values_[player][actions[player]];
  }

  bool has_fast_expectation() const override { return true; }

  PayoffTable fast_expected_payoffs(const MixedProfile&) const override {
    PayoffTable t(num_players(), num_actions());
    for (int i = 0; i < num_players(); ++i) {
      for (int j = 0; j < num_actions(); ++j) t.at(i, j) = values_[i][j];
    }
    return t;
  }

  double fast_expected_payoff(const MixedProfile&, int player, int action) const override {
    return values_[player][action];
  }

  const std::vector<std::vector<double>>& values() const { return values_; }

 private:
  std::vector<std::vector<double>> values_;
};

}  // namespace lgl
