#pragma once

// Seeded generators of c/n-large games, plus the JSON forms they travel in:
// a family descriptor {family, params, seed} and, for tiny games, the
// explicit tensor {n, k, c, payoffs}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgl/game.hpp"
#include "lgl/random.hpp"

namespace lgl {

enum class WeightTemplate { uniform, matching_pennies };

// u_i(a) = (1-mu) base_i(a_i) + mu/(n-1) * sum_{l != i} w_il(a_i, a_l),
// mu = min(1, c(n-1)/n). A unilateral switch by l moves u_i by at most
// mu/(n-1) <= c/n, and the expectation is multilinear in the mixed profile.
class LinearInfluenceGame final : public Game {
 public:
  LinearInfluenceGame(int num_players, int num_actions, double largeness_c,
                      std::vector<double> base, std::vector<double> weights)
      : Game(num_players, num_actions, largeness_c),
        base_(std::move(base)), weights_(std::move(weights)) {
    const auto n = static_cast<std::size_t>(num_players);
    const auto k = static_cast<std::size_t>(num_actions);
    if (num_players < 2) throw std::invalid_argument("LinearInfluenceGame: need n >= 2");
    if (base_.size() != n * k || weights_.size() != n * n * k * k) {
      throw std::invalid_argument("LinearInfluenceGame: parameter arrays have the wrong size");
    }
    mu_ = std::min(1.0, largeness_c * (num_players - 1) / num_players);
    pair_scale_ = mu_ / (num_players - 1);
  }

  std::string family() const override { return "linear_influence"; }

  double mixing() const { return mu_; }

  double base(int i, int ai) const { return base_[static_cast<std::size_t>(i) * num_actions() + ai]; }

  double weight(int i, int l, int ai, int al) const { return weights_[weight_index(i, l, ai, al)]; }

  double payoff(int i, std::span<const int> a) const override {
    const int n = num_players();
    double influence = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l != i) influence += weights_[weight_index(i, l, a[i], a[l])];
    }
    return (1.0 - mu_) * base(i, a[i]) + pair_scale_ * influence;
  }

  bool has_fast_expectation() const override { return true; }

  double fast_expected_payoff(const MixedProfile& p, int i, int j) const override {
    const int n = num_players();
    const int k = num_actions();
    double influence = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      const double* w = &weights_[weight_index(i, l, j, 0)];
      const auto row = p.row(l);
      for (int b = 0; b < k; ++b) influence += row[b] * w[b];
    }
    return (1.0 - mu_) * base(i, j) + pair_scale_ * influence;
  }

  PayoffTable fast_expected_payoffs(const MixedProfile& p) const override {
    PayoffTable t(num_players(), num_actions());
    for (int i = 0; i < num_players(); ++i) {
      for (int j = 0; j < num_actions(); ++j) t.at(i, j) = fast_expected_payoff(p, i, j);
    }
    return t;
  }

 private:
  std::size_t weight_index(int i, int l, int ai, int al) const {
    const auto n = static_cast<std::size_t>(num_players());
    const auto k = static_cast<std::size_t>(num_actions());
    return ((static_cast<std::size_t>(i) * n + l) * k + ai) * k + al;
  }

  std::vector<double> base_;
  std::vector<double> weights_;
  double mu_ = 0.0;
  double pair_scale_ = 0.0;
};

// G_b: player i's payoff mean is (ell-1)/ell for action b_i and 1/ell for
// 1-b_i, independent of everyone else. Realised utilities are Bernoulli draws
// when wrapped in a StochasticGame.
class LowerBoundGame final : public Game {
 public:
  LowerBoundGame(std::vector<int> bits, double ell)
      : Game(static_cast<int>(bits.size()), 2, 1.0), bits_(std::move(bits)), ell_(ell) {
    if (!(ell > 2.0)) throw std::invalid_argument("LowerBoundGame: ell must exceed 2");
    for (int b : bits_) {
      if (b != 0 && b != 1) throw std::invalid_argument("LowerBoundGame: bits must be 0/1");
    }
  }

  std::string family() const override { return "lower_bound"; }

  const std::vector<int>& bits() const { return bits_; }
  double ell() const { return ell_; }
  double high_mean() const { return (ell_ - 1.0) / ell_; }
  double low_mean() const { return 1.0 / ell_; }

  double payoff(int i, std::span<const int> a) const override {
    return a[i] == bits_[i] ? high_mean() : low_mean();
  }

  bool has_fast_expectation() const override { return true; }

  double fast_expected_payoff(const MixedProfile&, int i, int j) const override {
    return j == bits_[i] ? high_mean() : low_mean();
  }

  PayoffTable fast_expected_payoffs(const MixedProfile& p) const override {
    PayoffTable t(num_players(), 2);
    for (int i = 0; i < num_players(); ++i) {
      for (int j = 0; j < 2; ++j) t.at(i, j) = fast_expected_payoff(p, i, j);
    }
    return t;
  }

 private:
  std::vector<int> bits_;
  double ell_;
};

inline std::shared_ptr<LinearInfluenceGame> gen_linear_influence(
    int n, int k, double c, std::uint64_t seed,
    WeightTemplate weights = WeightTemplate::uniform) {
  if (n < 2 || k < 2) throw std::invalid_argument("gen_linear_influence: need n >= 2 and k >= 2");
  if (!(c >= 0.0 && c <= n)) throw std::invalid_argument("gen_linear_influence: c must lie in [0, n]");
  Rng rng(mix_seed(seed, 0x11));
  const auto nn = static_cast<std::size_t>(n);
  const auto kk = static_cast<std::size_t>(k);
  std::vector<double> base(nn * kk);
  for (double& x : base) x = unit_uniform(rng);
  std::vector<double> w(nn * nn * kk * kk, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      for (int ai = 0; ai < k; ++ai) {
        for (int al = 0; al < k; ++al) {
          double& cell = w[((static_cast<std::size_t>(i) * nn + l) * kk + ai) * kk + al];
          if (weights == WeightTemplate::uniform) {
            cell = unit_uniform(rng);
          } else {
            // i < l wants to match l, i > l wants to mismatch.
            cell = (i < l) == (ai == al) ? 1.0 : 0.0;
          }
        }
      }
    }
  }
  return std::make_shared<LinearInfluenceGame>(n, k, c, std::move(base), std::move(w));
}

inline std::shared_ptr<LowerBoundGame> gen_lower_bound(int n, double ell, std::uint64_t seed_for_b) {
  if (n < 1) throw std::invalid_argument("gen_lower_bound: need n >= 1");
  if (!(ell > 2.0)) throw std::invalid_argument("gen_lower_bound: ell must exceed 2");
  Rng rng(mix_seed(seed_for_b, 0x1b));
  std::vector<int> bits(n);
  for (int& b : bits) b = static_cast<int>(rng() >> 63);
  return std::make_shared<LowerBoundGame>(std::move(bits), ell);
}

// Uniform random tensor squeezed into [1/2 - gamma/2, 1/2 + gamma/2]; any
// unilateral change then moves any payoff by at most gamma. The map is a
// positive affine rescale, so best responses are unchanged.
inline std::shared_ptr<TensorGame> gen_tiny_tensor(int n, int k, double gamma, std::uint64_t seed) {
  if (n < 1 || k < 2) throw std::invalid_argument("gen_tiny_tensor: need n >= 1 and k >= 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gen_tiny_tensor: gamma in [0,1]");
  const std::uint64_t profiles = profile_count(n, k);
  if (profiles > 4096) throw std::invalid_argument("gen_tiny_tensor: k^n must be <= 4096");
  Rng rng(mix_seed(seed, 0x77));
  std::vector<double> payoffs(static_cast<std::size_t>(n) * profiles);
  for (double& x : payoffs) x = 0.5 + gamma * (unit_uniform(rng) - 0.5);
  return std::make_shared<TensorGame>(n, k, gamma * n, std::move(payoffs));
}

// Every payoff of `game` written out explicitly.
inline std::shared_ptr<TensorGame> materialize(const Game& game) {
  const int n = game.num_players();
  const int k = game.num_actions();
  const std::uint64_t total = profile_count(n, k);
  if (total > TensorGame::kMaxProfiles) throw CapabilityError("materialize: k^n too large");
  std::vector<double> payoffs(static_cast<std::size_t>(n) * total);
  PureProfile a(n);
  std::vector<double> row(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (int l = n - 1; l >= 0; --l) {
      a[l] = static_cast<int>(rest % k);
      rest /= k;
    }
    game.payoffs(a, row);
    for (int i = 0; i < n; ++i) payoffs[static_cast<std::size_t>(i) * total + idx] = row[i];
  }
  return std::make_shared<TensorGame>(n, k, game.largeness_c(), std::move(payoffs));
}

// ---- JSON ------------------------------------------------------------------

struct FamilyDescriptor {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;

  friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

inline void to_json(nlohmann::json& j, const FamilyDescriptor& d) {
  j = nlohmann::json{{"family", d.family}, {"params", d.params}, {"seed", d.seed}};
}

inline void from_json(const nlohmann::json& j, FamilyDescriptor& d) {
  d.family = j.at("family").get<std::string>();
  d.params = j.value("params", nlohmann::json::object());
  d.seed = j.value("seed", std::uint64_t{0});
}

inline WeightTemplate parse_weight_template(const std::string& name) {
  if (name == "uniform") return WeightTemplate::uniform;
  if (name == "matching_pennies") return WeightTemplate::matching_pennies;
  throw std::invalid_argument("unknown weight template: " + name);
}

inline GamePtr make_game(const FamilyDescriptor& d) {
  const auto& p = d.params;
  auto need_int = [&](const char* key) {
    if (!p.contains(key)) throw std::invalid_argument(d.family + ": missing parameter '" + key + "'");
    return p.at(key).get<int>();
  };
  auto need_double = [&](const char* key) {
    if (!p.contains(key)) throw std::invalid_argument(d.family + ": missing parameter '" + key + "'");
    return p.at(key).get<double>();
  };
  if (d.family == "linear_influence") {
    return gen_linear_influence(need_int("n"), p.value("k", 2), p.value("c", 1.0), d.seed,
                                parse_weight_template(p.value("weights", std::string("uniform"))));
  }
  if (d.family == "lower_bound") {
    return gen_lower_bound(need_int("n"), need_double("ell"), d.seed);
  }
  if (d.family == "tiny_tensor") {
    return gen_tiny_tensor(need_int("n"), p.value("k", 2), need_double("gamma"), d.seed);
  }
  if (d.family == "independent") {
    // Same action values for every player: {"n": 2, "values": [0.3, 0.7]}.
    return IndependentGame::symmetric(need_int("n"), p.at("values").get<std::vector<double>>(),
                                      p.value("c", 1.0));
  }
  if (d.family == "constant") {
    return IndependentGame::constant(need_int("n"), p.value("k", 2), p.value("value", 0.5),
                                     p.value("c", 1.0));
  }
  throw std::invalid_argument("unknown game family: " + d.family);
}

inline nlohmann::json tensor_game_to_json(const TensorGame& g) {
  return {{"n", g.num_players()},
          {"k", g.num_actions()},
          {"c", g.largeness_c()},
          {"payoffs", g.payoff_tensor()}};
}

inline std::shared_ptr<TensorGame> tensor_game_from_json(const nlohmann::json& j) {
  return std::make_shared<TensorGame>(j.at("n").get<int>(), j.at("k").get<int>(),
                                      j.value("c", 1.0), j.at("payoffs").get<std::vector<double>>());
}

// Accepts either a family descriptor or an explicit tensor.
inline GamePtr load_game(const nlohmann::json& j) {
  if (j.contains("family")) return make_game(j.get<FamilyDescriptor>());
  if (j.contains("payoffs")) return tensor_game_from_json(j);
  throw std::invalid_argument("game JSON needs either 'family' or 'payoffs'");
}

}  // namespace lgl
