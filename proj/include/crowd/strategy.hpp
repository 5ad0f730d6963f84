#ifndef CROWD_STRATEGY_HPP
#define CROWD_STRATEGY_HPP

#include <string>
#include <vector>

#include "crowd/rng.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"
#include "crowd/vec2.hpp"

namespace crowd {

// Leader control law.  PiecewiseConstant holds one velocity per (switch
// slot, leader) and is the search space of the compass optimizer;
// GoToTarget is the unit-speed feedback toward the exit; RandomNearExit is
// the smart-obstacle policy (random velocity, tethered to the exit region);
// MpcPolicy defers to the receding-horizon controller in the runner.
struct LeaderStrategy {
    enum class Kind { PiecewiseConstant, GoToTarget, RandomNearExit, MpcPolicy };
    Kind kind = Kind::GoToTarget;

    // piecewise-constant data
    int switch_interval = 20;                  // steps per slot
    double u_bound = 1.0;                      // box [-u_bound, u_bound]^2
    std::vector<std::vector<Vec2>> velocities; // [slot][leader]

    // random-near-exit data
    double speed_bound = 1.3;   // per-component uniform bound
    Vec2 tether_center{};
    double tether_radius = 1.0;

    int n_slots() const { return static_cast<int>(velocities.size()); }
    int n_leaders() const {
        return velocities.empty() ? 0 : static_cast<int>(velocities[0].size());
    }
    bool within_box() const {
        for (const auto& slot : velocities)
            for (const auto& u : slot)
                if (std::abs(u.x) > u_bound || std::abs(u.y) > u_bound) return false;
        return true;
    }
};

// Unit vector from y toward the target; zero at the target itself.
inline Vec2 go_to_target(const Vec2& y, const Vec2& target) {
    return (target - y).unit_or_zero();
}

// Straight-run initial guess: every slot points each leader from its initial
// position toward the target at unit speed.
LeaderStrategy straight_line_strategy(const std::vector<Vec2>& leader_positions,
                                      const Vec2& target, int switch_interval,
                                      int horizon_steps, double u_bound);

// Controls for one step.  MpcPolicy is resolved by the caller and must not
// reach this function.
std::vector<Vec2> strategy_controls(const LeaderStrategy& st, long step,
                                    const CrowdState& state, const Scenario& sc,
                                    const RandomSource& rng);

}  // namespace crowd

#endif
