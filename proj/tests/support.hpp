#pragma once

// Reference computations used as ground truth by the tests. They share no
// code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lgl/game.hpp"
#include "lgl/profile.hpp"

namespace lgl_test {

// E[u_i(j, a_-i)] by walking every pure profile of the game.
inline double enumerated_payoff(const lgl::Game& g, const lgl::MixedProfile& p, int i, int j) {
  const int n = g.num_players();
  const int k = g.num_actions();
  std::vector<int> a(n, 0);
  double total = 0.0;
  while (true) {
    if (a[i] == j) {
      double w = 1.0;
      for (int l = 0; l < n; ++l) {
        if (l != i) w *= p.at(l, a[l]);
      }
      if (w > 0.0) total += w * g.payoff(i, a);
    }
    int pos = 0;
    while (pos < n && ++a[pos] == k) a[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

// Plain Monte-Carlo estimate of E[u_i(j, a_-i)] with std::discrete_distribution.
inline double monte_carlo_payoff(const lgl::Game& g, const lgl::MixedProfile& p, int i, int j,
                                 int samples, std::uint64_t seed) {
  const int n = g.num_players();
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::vector<std::discrete_distribution<int>> dists;
  for (int l = 0; l < n; ++l) {
    auto row = p.row(l);
    dists.emplace_back(row.begin(), row.end());
  }
  std::vector<int> a(n);
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int l = 0; l < n; ++l) a[l] = l == i ? j : dists[l](rng);
    total += g.payoff(i, a);
  }
  return total / samples;
}

// Best left sum of a truncated triangle over k-point partitions restricted to
// a grid of the given pitch (points may coincide). Dynamic programme over the
// position of the last chosen point.
inline double grid_max_left_sum(double b, double h, int k, double pitch) {
  const int g = static_cast<int>(std::floor(b / pitch + 1e-9));
  std::vector<double> x(g + 1);
  for (int t = 0; t <= g; ++t) x[t] = std::min(t * pitch, b);
  auto height = [&](double v) { return std::min(h * v, 1.0); };
  std::vector<double> best(g + 1, 0.0);
  for (int m = 2; m <= k; ++m) {
    std::vector<double> next(g + 1, -1.0);
    for (int cur = 0; cur <= g; ++cur) {
      for (int prev = 0; prev <= cur; ++prev) {
        next[cur] = std::max(next[cur], best[prev] + height(x[prev]) * (x[cur] - x[prev]));
      }
    }
    best = std::move(next);
  }
  double out = 0.0;
  for (int cur = 0; cur <= g; ++cur) out = std::max(out, best[cur] + height(x[cur]) * (b - x[cur]));
  return out;
}

}  // namespace lgl_test
