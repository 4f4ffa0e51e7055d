#pragma once

// Fixed-step explicit integration of the continuous plane dynamics. Payoffs
// are exact (Q_M); payoff velocities are backward differences over the last
// step, the only derivative a query-based player could observe.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "lgl/analysis.hpp"
#include "lgl/plane.hpp"

namespace lgl {

struct TrajectoryPoint {
  double t = 0.0;
  std::vector<StrategyPayoffState> states;
  // Distance to the target set: plane offset for UCN, p* residual for UCN-gamma.
  std::vector<double> distance;
};

struct Trajectory {
  double step = 0.0;
  // Half-width of the band a player must enter.
  double tolerance = 0.0;
  std::vector<TrajectoryPoint> points;

  int num_players() const { return points.empty() ? 0 : static_cast<int>(points[0].states.size()); }

  // First recorded time the player is inside the band, +inf if never.
  double entry_time(int player) const {
    for (const auto& pt : points) {
      if (std::abs(pt.distance[player]) <= tolerance) return pt.t;
    }
    return std::numeric_limits<double>::infinity();
  }

  // Largest |distance| at or after time `from`.
  double worst_distance_after(int player, double from) const {
    double worst = 0.0;
    for (const auto& pt : points) {
      if (pt.t >= from - 1e-12) worst = std::max(worst, std::abs(pt.distance[player]));
    }
    return worst;
  }

  // CSV with columns t,player,v1,v0,p,d; keeps every `every`-th time step.
  void write_csv(std::ostream& out, int every = 1) const {
    out << "t,player,v1,v0,p,d\n";
    out.precision(17);
    for (std::size_t s = 0; s < points.size(); s += std::max(every, 1)) {
      const auto& pt = points[s];
      for (std::size_t i = 0; i < pt.states.size(); ++i) {
        out << pt.t << ',' << i << ',' << pt.states[i].v1 << ',' << pt.states[i].v0 << ','
            << pt.states[i].p << ',' << pt.distance[i] << '\n';
      }
    }
  }
};

namespace detail {

// `velocity(state, v1dot, v0dot, distance)` gives dp/dt for one player.
template <typename Velocity>
Trajectory integrate(const Game& game, double step, double horizon, double tolerance,
                     bool gamma_target_distance, double c, Velocity&& velocity) {
  if (game.num_actions() != 2) throw std::invalid_argument("continuous dynamics need a binary game");
  if (!game.has_fast_expectation()) {
    // Brute force is allowed for tiny games; anything else is refused up front.
    if (profile_count(game.num_players(), 2) > kMaxJointSupport) {
      throw CapabilityError("continuous dynamics need exact mixed payoffs");
    }
  }
  if (!(step > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("need step > 0, horizon >= 0");
  const int n = game.num_players();
  const auto steps = static_cast<long>(std::llround(horizon / step));

  Trajectory traj;
  traj.step = step;
  traj.tolerance = tolerance;
  traj.points.reserve(steps + 1);

  MixedProfile p = MixedProfile::uniform(n, 2);
  PayoffTable cur = expected_payoffs(game, p);
  PayoffTable prev = cur;
  for (long s = 0;; ++s) {
    TrajectoryPoint pt;
    pt.t = s * step;
    pt.states.resize(n);
    pt.distance.resize(n);
    for (int i = 0; i < n; ++i) {
      pt.states[i] = strategy_payoff_state(cur, p, i);
      pt.distance[i] = gamma_target_distance ? gamma_residual(pt.states[i], c)
                                             : plane_offset(pt.states[i]);
    }
    if (s == steps) {
      traj.points.push_back(std::move(pt));
      break;
    }
    MixedProfile next = p;
    for (int i = 0; i < n; ++i) {
      const double v1dot = (cur.at(i, 1) - prev.at(i, 1)) / step;
      const double v0dot = (cur.at(i, 0) - prev.at(i, 0)) / step;
      const double pdot = std::clamp(velocity(pt.states[i], v1dot, v0dot), -1.0, 1.0);
      next.set_binary(i, std::clamp(p.binary(i) + step * pdot, 0.0, 1.0));
    }
    traj.points.push_back(std::move(pt));
    prev = std::move(cur);
    p = std::move(next);
    cur = expected_payoffs(game, p);
  }
  return traj;
}

// dp/dt that moves best-response mass at unit speed in direction `sign`.
inline double toward_best_response(const StrategyPayoffState& s, double sign) {
  return s.prefers_one() ? sign : -sign;
}

}  // namespace detail

// UCN from p = 1/2: off the band, p* moves at unit speed (up when under-
// committed, down when over-committed); on it, dp/dt = (dv1/dt - dv0/dt)/2.
// Membership is judged with half-width 2h. The rule itself switches to
// tracking at h: the backward-difference v-dot lags by a step, and that slack
// keeps a tracking player inside the 2h band when opponents change mode.
inline Trajectory simulate_ucn(const Game& game, double step, double horizon) {
  const double tol = 2.0 * step;
  const double rule = tol / 2.0;
  return detail::integrate(game, step, horizon, tol, false, 1.0,
                           [rule](const StrategyPayoffState& s, double v1dot, double v0dot) {
                             const double r = plane_residual(s);
                             if (r < -rule) return detail::toward_best_response(s, 1.0);
                             if (r > rule) return detail::toward_best_response(s, -1.0);
                             return 0.5 * (v1dot - v0dot);
                           });
}

// UCN-gamma: same shape aimed at P_gamma with on-band tracking
// dp/dt = (dv1/dt - dv0/dt)/(2c). Where P_gamma saturates (D >= c) the player
// climbs to the pure best response and stays there.
inline Trajectory simulate_ucn_gamma(const Game& game, double c, double step, double horizon) {
  if (!(c > 0.0)) throw std::invalid_argument("simulate_ucn_gamma: c must be positive");
  const double tol = 2.0 * step * std::max(1.0, 1.0 / (2.0 * c));
  const double rule = tol / 2.0;
  return detail::integrate(game, step, horizon, tol, true, c,
                           [rule, c](const StrategyPayoffState& s, double v1dot, double v0dot) {
                             const double r = gamma_residual(s, c);
                             if (r < -rule) return detail::toward_best_response(s, 1.0);
                             if (r > rule) return detail::toward_best_response(s, -1.0);
                             if (0.5 + s.discrepancy() / (2.0 * c) >= 1.0) {
                               return detail::toward_best_response(s, 1.0);
                             }
                             return (v1dot - v0dot) / (2.0 * c);
                           });
}

}  // namespace lgl
