#include "crowd/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace crowd {

LeaderStrategy straight_line_strategy(const std::vector<Vec2>& leader_positions,
                                      const Vec2& target, int switch_interval,
                                      int horizon_steps, double u_bound) {
    LeaderStrategy st;
    st.kind = LeaderStrategy::Kind::PiecewiseConstant;
    st.switch_interval = switch_interval;
    st.u_bound = u_bound;
    const int slots = (horizon_steps + switch_interval - 1) / switch_interval;
    std::vector<Vec2> row(leader_positions.size());
    for (size_t k = 0; k < leader_positions.size(); ++k) {
        Vec2 u = go_to_target(leader_positions[k], target);
        u.x = std::clamp(u.x, -u_bound, u_bound);
        u.y = std::clamp(u.y, -u_bound, u_bound);
        row[k] = u;
    }
    st.velocities.assign(slots, row);
    return st;
}

std::vector<Vec2> strategy_controls(const LeaderStrategy& st, long step,
                                    const CrowdState& state, const Scenario& sc,
                                    const RandomSource& rng) {
    const int nl = static_cast<int>(state.leaders.size());
    std::vector<Vec2> u(nl, Vec2{0.0, 0.0});
    switch (st.kind) {
        case LeaderStrategy::Kind::PiecewiseConstant: {
            if (nl == 0) return u;
            if (st.n_leaders() != nl)
                throw std::invalid_argument("strategy_controls: leader count mismatch");
            int slot = static_cast<int>(step / st.switch_interval);
            slot = std::min(slot, st.n_slots() - 1);
            for (int k = 0; k < nl; ++k) u[k] = st.velocities[slot][k];
            break;
        }
        case LeaderStrategy::Kind::GoToTarget: {
            for (int k = 0; k < nl; ++k)
                u[k] = go_to_target(state.leaders[k].position, sc.target);
            break;
        }
        case LeaderStrategy::Kind::RandomNearExit: {
            for (int k = 0; k < nl; ++k) {
                const Vec2 y = state.leaders[k].position;
                if (dist_sq(y, st.tether_center) > st.tether_radius * st.tether_radius) {
                    // drifted out of the exit region: head back instead
                    u[k] = st.speed_bound * (st.tether_center - y).unit_or_zero();
                } else {
                    RandomSource r = rng.at(rng_tag::leader_policy,
                                            static_cast<std::uint64_t>(step),
                                            static_cast<std::uint64_t>(k));
                    u[k] = {r.uniform(-st.speed_bound, st.speed_bound),
                            r.uniform(-st.speed_bound, st.speed_bound)};
                }
            }
            break;
        }
        case LeaderStrategy::Kind::MpcPolicy:
            throw std::logic_error("strategy_controls: MPC is resolved by the runner");
    }
    return u;
}

}  // namespace crowd
