#pragma once

// Block-update (BU) for k-action c/n-large games, and the truncated-triangle
// left sums that bound its worst-case regret.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgl/binary.hpp"
#include "lgl/oracle.hpp"
#include "lgl/random.hpp"
#include "lgl/report.hpp"

namespace lgl {

// Each player's strategy is N blocks of mass 1/N, each sitting on one action.
class BlockAllocation {
 public:
  BlockAllocation(int num_players, int num_actions, int num_blocks)
      : n_(num_players), k_(num_actions), blocks_(num_blocks),
        actions_(static_cast<std::size_t>(num_players) * num_blocks, 0) {
    if (num_blocks < 1) throw std::invalid_argument("BlockAllocation: need at least one block");
  }

  int num_players() const { return n_; }
  int num_actions() const { return k_; }
  int num_blocks() const { return blocks_; }

  int action(int player, int block) const { return actions_[index(player, block)]; }
  void assign(int player, int block, int action) {
    if (action < 0 || action >= k_) throw std::invalid_argument("block action out of range");
    actions_[index(player, block)] = action;
  }

  MixedProfile induced_profile() const {
    MixedProfile p(n_, k_);
    std::vector<int> count(static_cast<std::size_t>(k_));
    for (int i = 0; i < n_; ++i) {
      std::fill(count.begin(), count.end(), 0);
      for (int b = 0; b < blocks_; ++b) ++count[static_cast<std::size_t>(action(i, b))];
      for (int j = 0; j < k_; ++j) p.at(i, j) = static_cast<double>(count[static_cast<std::size_t>(j)]) / blocks_;
    }
    return p;
  }

 private:
  std::size_t index(int player, int block) const {
    return static_cast<std::size_t>(player) * blocks_ + block;
  }

  int n_;
  int k_;
  int blocks_;
  std::vector<int> actions_;
};

enum class BlockInit { all_zero, random };

struct BlockRun {
  MixedProfile profile;
  RunReport report;
  BlockAllocation allocation;
};

// Round t (1-based) observes expected payoffs at the current induced profile
// and moves every player's block t onto its best response (lowest index on
// ties), all players simultaneously.
inline BlockRun bu(MixedOracle& oracle, int num_blocks, BlockInit init = BlockInit::all_zero,
                   std::uint64_t init_seed = 0) {
  const Game& game = oracle.game();
  const int n = game.num_players();
  const int k = game.num_actions();
  BlockAllocation alloc(n, k, num_blocks);
  if (init == BlockInit::random) {
    Rng rng(mix_seed(init_seed, 0xb1));
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < num_blocks; ++b) alloc.assign(i, b, static_cast<int>(rng() % k));
    }
  }
  MixedProfile p = alloc.induced_profile();
  Digest rounds_digest;
  for (int t = 0; t < num_blocks; ++t) {
    const PayoffTable table = oracle.query(p);
    for (int i = 0; i < n; ++i) {
      const int br = table.best_response(i);
      alloc.assign(i, t, br);
      rounds_digest.add(br);
    }
    p = alloc.induced_profile();
  }

  RunReport report;
  report.algorithm = "bu";
  report.params = {{"N", num_blocks}, {"init", init == BlockInit::all_zero ? "zero" : "random"}};
  report.rounds = num_blocks;
  report.blocks = num_blocks;
  report.allocation_digest = rounds_digest.hex();
  Run done = detail::finish(oracle, std::move(p), std::move(report));
  return {std::move(done.profile), std::move(done.report), std::move(alloc)};
}

// Final optimality gap of the action sitting in each block, per player.
inline std::vector<std::vector<double>> block_gaps(const PayoffTable& final_payoffs,
                                                   const BlockAllocation& alloc) {
  std::vector<std::vector<double>> gaps(alloc.num_players(), std::vector<double>(alloc.num_blocks()));
  for (int i = 0; i < alloc.num_players(); ++i) {
    const double best = final_payoffs.best_value(i);
    for (int b = 0; b < alloc.num_blocks(); ++b) {
      gaps[i][b] = best - final_payoffs.at(i, alloc.action(i, b));
    }
  }
  return gaps;
}

// Block t (1-based) was placed on a best response and has since seen N-t+1
// rounds of 1/N mass shifts, each moving any payoff gap by at most 2c/N.
inline double block_gap_ceiling(double c, int num_blocks, int block_one_based) {
  return std::min(1.0, 2.0 * c * (num_blocks - block_one_based + 1) / num_blocks);
}

// ---- truncated triangles -----------------------------------------------------

// Region under y = slope * x on [0, base], capped at y = 1.
struct TruncatedTriangle {
  double base = 1.0;
  double slope = 1.0;

  TruncatedTriangle(double b, double h) : base(b), slope(h) {
    if (!(b > 0.0) || !(h > 0.0)) throw std::invalid_argument("TruncatedTriangle: need b, h > 0");
  }

  double height(double x) const { return std::min(slope * x, 1.0); }
  bool cap_active() const { return base * slope > 1.0; }
};

// sum_i min(h x_i, 1) (x_{i+1} - x_i), with x_{r+1} = b.
inline double left_sum(const TruncatedTriangle& tri, std::span<const double> partition) {
  double total = 0.0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const double x = partition[i];
    if (!(x >= 0.0 && x <= tri.base)) throw std::invalid_argument("left_sum: point outside [0, b]");
    if (i > 0 && x < partition[i - 1]) throw std::invalid_argument("left_sum: partition not sorted");
    const double next = i + 1 < partition.size() ? partition[i + 1] : tri.base;
    total += tri.height(x) * (next - x);
  }
  return total;
}

struct LeftSumOptimum {
  double value = 0.0;
  std::vector<double> partition;
};

// Largest left sum over partitions of exactly k points.
//
// While the untruncated optimum {i b/(k+1)} stays under the cap (h b k/(k+1)
// <= 1) it is also optimal here, worth (b^2 h/2) k/(k+1). Otherwise the last
// point sits where the cap starts, x = 1/h, with the other k-1 points spread
// evenly below it: b - 1/(2h) - 1/(2hk).
inline LeftSumOptimum max_left_sum(const TruncatedTriangle& tri, int k) {
  if (k < 1) throw std::invalid_argument("max_left_sum: need k >= 1");
  const double b = tri.base;
  const double h = tri.slope;
  LeftSumOptimum out;
  if (h * b * k / (k + 1.0) <= 1.0) {
    out.value = 0.5 * b * b * h * k / (k + 1.0);
    for (int i = 1; i <= k; ++i) out.partition.push_back(i * b / (k + 1.0));
  } else {
    out.value = b - 1.0 / (2.0 * h) - 1.0 / (2.0 * h * k);
    for (int i = 1; i < k; ++i) out.partition.push_back(i / (h * k));
    out.partition.push_back(1.0 / h);
  }
  return out;
}

// ---- regret guarantees -------------------------------------------------------

struct BoundValue {
  std::string epsilon_case;
  double epsilon = 0.0;
};

// Guarantee of BU with exact payoffs (alpha = 0) or with sampled payoffs of
// additive error alpha. Pass num_blocks = +inf for the N -> infinity limit.
inline BoundValue bu_bound(double c, int k, double num_blocks, double alpha = 0.0) {
  if (!(c > 0.0) || k < 2 || !(num_blocks >= 1.0) || !(alpha >= 0.0)) {
    throw std::invalid_argument("bu_bound: need c > 0, k >= 2, N >= 1, alpha >= 0");
  }
  const double inflation = 1.0 + 1.0 / num_blocks + alpha / (2.0 * c);
  const double spread = (k - 1.0) / k;
  if (c <= 0.5) return {"c<=1/2", c * spread * inflation};
  if (spread <= 1.0 / (2.0 * c)) return {"(k-1)/k<=1/(2c)", c * spread * inflation};
  return {"(k-1)/k>1/(2c)", (1.0 - 1.0 / (4.0 * c) - 1.0 / (4.0 * c * (k - 1))) * inflation};
}

// The k-independent guarantee: c(1 + 1/N) for c <= 1/2, else 1 - 1/(4c) + 1/(2N).
inline double bu_first_bound(double c, double num_blocks) {
  if (c <= 0.5) return c * (1.0 + 1.0 / num_blocks);
  return 1.0 - 1.0 / (4.0 * c) + 1.0 / (2.0 * num_blocks);
}

// Slot b (1-based) may hold a strategy of regret at most min(1, 2c b/N).
inline double slot_cap(double c, int num_blocks, int slot) {
  return std::min(1.0, 2.0 * c * slot / num_blocks);
}

// Total regret when every slot takes the largest regret it may hold.
// `regrets` must be sorted ascending with regrets[0] = 0.
inline double greedy_allotment_regret(std::span<const double> regrets, double c, int num_blocks) {
  double total = 0.0;
  for (int slot = 1; slot <= num_blocks; ++slot) {
    const double cap = slot_cap(c, num_blocks, slot);
    double best = 0.0;
    for (double r : regrets) {
      if (r <= cap) best = std::max(best, r);
    }
    total += best;
  }
  return total / num_blocks;
}

// Total regret of an explicit slot -> strategy assignment; throws if some slot
// holds a strategy above its cap.
inline double allotment_regret(std::span<const double> regrets, std::span<const int> assignment,
                               double c) {
  const int num_blocks = static_cast<int>(assignment.size());
  double total = 0.0;
  for (int slot = 1; slot <= num_blocks; ++slot) {
    const double r = regrets[assignment[slot - 1]];
    if (r > slot_cap(c, num_blocks, slot)) throw std::invalid_argument("infeasible allotment");
    total += r;
  }
  return total / num_blocks;
}

}  // namespace lgl
