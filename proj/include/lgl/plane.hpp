#pragma once

// Geometry of the regret-1/8 plane for binary games and its c/n-large
// generalisation.
//
// A state s = (v1, v0, p) lies on P when s . (-1/2, 1/2, 1) = 1/2, i.e. when
// the best-response mass equals (1 + D)/2. Regret is D(1 - p*), so on P it is
// at most 1/8, and on the band |s . n - 1/2| <= lambda at most (1 + 2 lambda)^2 / 8.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lgl/analysis.hpp"

namespace lgl {

inline constexpr std::array<double, 3> kPlaneNormal{-0.5, 0.5, 1.0};
inline constexpr double kPlaneLevel = 0.5;

// h(x) = x . n
inline double plane_height(const std::array<double, 3>& x) {
  return x[0] * kPlaneNormal[0] + x[1] * kPlaneNormal[1] + x[2] * kPlaneNormal[2];
}

inline double plane_height(const StrategyPayoffState& s) {
  return plane_height(std::array<double, 3>{s.v1, s.v0, s.p});
}

// Signed distance s . n - 1/2 along the normal.
inline double plane_offset(const StrategyPayoffState& s) { return plane_height(s) - kPlaneLevel; }

// p* - (1 + D)/2. Same magnitude as plane_offset; negative means the player
// is under-committed to its best response.
inline double plane_residual(const StrategyPayoffState& s) {
  return s.best_response_mass() - 0.5 * (1.0 + s.discrepancy());
}

inline bool in_band(const StrategyPayoffState& s, double half_width) {
  return std::abs(plane_offset(s)) <= half_width;
}

// Worst regret of any state within half_width of P.
inline double band_regret_ceiling(double half_width) {
  const double t = 1.0 + 2.0 * half_width;
  return t * t / 8.0;
}

// Band half-width whose regret ceiling is exactly 1/8 + alpha.
inline double band_width_for(double alpha) { return (std::sqrt(1.0 + 8.0 * alpha) - 1.0) / 2.0; }

struct UNParams {
  double alpha = 0.125;
  double eta = 0.1;

  UNParams() = default;
  UNParams(double accuracy, double confidence) : alpha(accuracy), eta(confidence) {
    if (!(alpha > 0.0)) throw std::invalid_argument("UN: alpha must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("UN: eta must lie in (0,1)");
  }

  double lambda() const { return band_width_for(alpha); }
  double step() const { return lambda() / 4.0; }
  int rounds() const { return static_cast<int>(std::ceil(2.0 / step())); }
};

// ---- c/n-large generalisation ----------------------------------------------

// Target best-response mass on P_gamma: min(1/2 + D/(2c), 1).
inline double gamma_target(double discrepancy, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("gamma_target: c must be positive");
  return std::min(0.5 + discrepancy / (2.0 * c), 1.0);
}

inline double gamma_residual(const StrategyPayoffState& s, double c) {
  return s.best_response_mass() - gamma_target(s.discrepancy(), c);
}

// Regret guarantee on P_gamma itself.
inline double gamma_regret_bound(double c) { return c <= 2.0 ? c / 8.0 : 0.5 - 0.5 / c; }

// Worst regret over states with p* >= target(D) - half_width, D in [0,1].
inline double gamma_band_regret_ceiling(double c, double half_width) {
  const double d_max = std::min(c, 1.0);
  // Unsaturated stretch: D (1/2 + w - D/(2c)), concave in D.
  const double d_star = std::clamp(c * (0.5 + half_width), 0.0, d_max);
  double worst = d_star * (0.5 + half_width - d_star / (2.0 * c));
  // Saturated stretch (target 1) exists only for c < 1: D * w, largest at D = 1.
  if (c < 1.0) worst = std::max(worst, half_width);
  return worst;
}

// Largest band half-width whose ceiling stays within the P_gamma bound plus
// alpha. Reduces to band_width_for(alpha) at c = 1.
inline double gamma_band_width_for(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("gamma band: need c, alpha > 0");
  const double target = gamma_regret_bound(c) + alpha;
  const double interior = (std::sqrt(1.0 + 8.0 * alpha / c) - 1.0) / 2.0;
  if (gamma_band_regret_ceiling(c, interior) <= target + 1e-15) return interior;
  double lo = 0.0;
  double hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gamma_band_regret_ceiling(c, mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace lgl
