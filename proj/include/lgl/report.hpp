#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgl/analysis.hpp"
#include "lgl/game.hpp"

namespace lgl {

// FNV-1a over raw bytes; stable across platforms with IEEE doubles.
class Digest {
 public:
  void add(std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      state_ ^= (word >> (8 * b)) & 0xffu;
      state_ *= 0x100000001b3ULL;
    }
  }
  void add(double x) { add(std::bit_cast<std::uint64_t>(x)); }
  void add(int x) { add(static_cast<std::uint64_t>(static_cast<std::uint32_t>(x))); }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string profile_digest(const MixedProfile& p) {
  Digest d;
  d.add(p.num_players());
  d.add(p.num_actions());
  for (double x : p.flat()) d.add(x);
  return d.hex();
}

struct RegretSummary {
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
};

inline RegretSummary summarize(std::vector<double> values) {
  RegretSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / values.size();
  s.median = values[values.size() / 2];
  s.p90 = values[std::min(values.size() - 1, static_cast<std::size_t>(0.9 * values.size()))];
  s.max = values.back();
  return s;
}

struct RunReport {
  std::string algorithm;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  int n = 0;
  int k = 2;
  double c = 1.0;
  int rounds = 0;
  std::uint64_t pure_queries = 0;
  std::uint64_t qm_calls = 0;
  // Exact regrets of the final profile; NaN when the game cannot be
  // evaluated exactly.
  double max_regret = std::numeric_limits<double>::quiet_NaN();
  RegretSummary regret_summary;
  std::vector<double> regrets;
  std::string final_profile_digest;
  // Block-update runs only.
  int blocks = 0;
  std::string allocation_digest;
  // Theoretical guarantee the run is checked against, when one applies.
  std::optional<double> bound;

  bool violates_bound() const { return bound && !(max_regret <= *bound + 1e-9); }
};

// Fills the game-shape fields, exact regrets and digest.
inline void finalize_report(RunReport& r, const Game& game, const MixedProfile& profile) {
  r.n = game.num_players();
  r.k = game.num_actions();
  r.c = game.largeness_c();
  r.final_profile_digest = profile_digest(profile);
  try {
    const RegretReport exact = regret_report(game, profile);
    r.regrets = exact.regrets;
    r.max_regret = exact.max_regret;
    r.regret_summary = summarize(exact.regrets);
  } catch (const CapabilityError&) {
    r.regrets.clear();
  }
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  j = nlohmann::json{
      {"algorithm", r.algorithm},
      {"params", r.params},
      {"seed", r.seed},
      {"n", r.n},
      {"c", r.c},
      {"k", r.k},
      {"rounds", r.rounds},
      {"pure_queries", r.pure_queries},
      {"qm_calls", r.qm_calls},
      {"max_regret", num(r.max_regret)},
      {"per_player_regret_summary",
       {{"mean", num(r.regret_summary.mean)},
        {"median", num(r.regret_summary.median)},
        {"p90", num(r.regret_summary.p90)},
        {"max", num(r.regret_summary.max)}}},
      {"final_profile_digest", r.final_profile_digest},
  };
  if (r.blocks > 0) {
    j["N"] = r.blocks;
    j["per_round_allocation_digest"] = r.allocation_digest;
  }
  j["bound"] = r.bound ? nlohmann::json(*r.bound) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const RegretReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& row : r.support_gaps) {
    nlohmann::json jr = nlohmann::json::array();
    for (double g : row) jr.push_back(num(g));
    gaps.push_back(std::move(jr));
  }
  nlohmann::json j{{"regrets", r.regrets}, {"max_regret", r.max_regret}, {"support_gaps", gaps}};
  if (!r.discrepancies.empty()) j["discrepancies"] = r.discrepancies;
  return j;
}

}  // namespace lgl
