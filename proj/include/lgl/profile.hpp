#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgl {

// Raised when an operation needs a capability the game does not offer, e.g.
// exact mixed expectations on a game too large to enumerate.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kSupportThreshold = 1e-12;

// One action index per player.
using PureProfile = std::vector<int>;

// Per-player distributions over k actions, stored row-major (player, action).
// Binary games read p_i as the probability of action 1.
class MixedProfile {
 public:
  MixedProfile() = default;

  MixedProfile(int num_players, int num_actions)
      : n_(num_players), k_(num_actions),
        probs_(static_cast<std::size_t>(num_players) * num_actions, 0.0) {
    if (num_players < 1 || num_actions < 1) {
      throw std::invalid_argument("MixedProfile: need n >= 1 and k >= 1");
    }
  }

  static MixedProfile uniform(int num_players, int num_actions) {
    MixedProfile p(num_players, num_actions);
    for (double& x : p.probs_) x = 1.0 / num_actions;
    return p;
  }

  static MixedProfile from_binary(std::span<const double> prob_one) {
    MixedProfile p(static_cast<int>(prob_one.size()), 2);
    for (int i = 0; i < p.n_; ++i) p.set_binary(i, prob_one[i]);
    return p;
  }

  static MixedProfile from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("MixedProfile: no players");
    MixedProfile p(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < p.n_; ++i) {
      if (static_cast<int>(rows[i].size()) != p.k_) {
        throw std::invalid_argument("MixedProfile: ragged rows");
      }
      for (int j = 0; j < p.k_; ++j) p.at(i, j) = rows[i][j];
    }
    p.validate();
    return p;
  }

  static MixedProfile pure(const PureProfile& a, int num_actions) {
    MixedProfile p(static_cast<int>(a.size()), num_actions);
    for (int i = 0; i < p.n_; ++i) p.at(i, a[i]) = 1.0;
    return p;
  }

  int num_players() const { return n_; }
  int num_actions() const { return k_; }

  double& at(int i, int j) { return probs_[index(i, j)]; }
  double at(int i, int j) const { return probs_[index(i, j)]; }

  std::span<const double> row(int i) const {
    return {probs_.data() + index(i, 0), static_cast<std::size_t>(k_)};
  }
  std::span<double> row(int i) {
    return {probs_.data() + index(i, 0), static_cast<std::size_t>(k_)};
  }

  double binary(int i) const { return at(i, 1); }

  void set_binary(int i, double prob_one) {
    if (k_ != 2) throw std::invalid_argument("set_binary on a non-binary profile");
    if (!(prob_one >= 0.0 && prob_one <= 1.0)) {
      throw std::invalid_argument("binary probability outside [0,1]");
    }
    at(i, 1) = prob_one;
    at(i, 0) = 1.0 - prob_one;
  }

  std::vector<double> binary_vector() const {
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = binary(i);
    return out;
  }

  std::span<const double> flat() const { return probs_; }

  void validate() const {
    for (int i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (int j = 0; j < k_; ++j) {
        const double x = at(i, j);
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw std::invalid_argument("MixedProfile: negative or non-finite probability for player " +
                                      std::to_string(i));
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("MixedProfile: row " + std::to_string(i) +
                                    " does not sum to 1");
      }
    }
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * k_ + j;
  }

  int n_ = 0;
  int k_ = 0;
  std::vector<double> probs_;
};

// u_i(j, p_{-i}) for every player i and action j.
class PayoffTable {
 public:
  PayoffTable() = default;
  PayoffTable(int num_players, int num_actions)
      : n_(num_players), k_(num_actions),
        values_(static_cast<std::size_t>(num_players) * num_actions, 0.0) {}

  int num_players() const { return n_; }
  int num_actions() const { return k_; }

  double& at(int i, int j) { return values_[static_cast<std::size_t>(i) * k_ + j]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * k_ + j]; }

  std::span<const double> row(int i) const {
    return {values_.data() + static_cast<std::size_t>(i) * k_, static_cast<std::size_t>(k_)};
  }

  // Lowest index wins ties.
  int best_response(int i) const {
    int best = 0;
    for (int j = 1; j < k_; ++j) {
      if (at(i, j) > at(i, best)) best = j;
    }
    return best;
  }

  double best_value(int i) const { return at(i, best_response(i)); }

  const std::vector<double>& flat() const { return values_; }

  friend bool operator==(const PayoffTable&, const PayoffTable&) = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<double> values_;
};

}  // namespace lgl
