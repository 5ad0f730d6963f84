#ifndef CROWD_MICRO_HPP
#define CROWD_MICRO_HPP

#include <vector>

#include "crowd/kernels.hpp"
#include "crowd/params.hpp"
#include "crowd/rng.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"

namespace crowd {

struct MicroOptions {
    bool hard_sphere = false;
    double diameter = 0.25;
};

struct StepDebug {
    long degenerate_balls = 0;  // topological ball asked for more agents than exist
};

// Instantaneous velocity of leader k: repulsion from active followers and
// from the other leaders, plus the control.
Vec2 leader_velocity(int k, const CrowdState& state, const Vec2& u_k,
                     const ModelParams& p);

// One explicit Euler step of the coupled follower/leader dynamics.
// Order: forces from the step-start state, velocity update (capped), position
// update with the pre-update velocity, wall resolution, optional hard-sphere
// freeze, exit removal.  Draws are keyed by (step, agent), so the result is
// independent of evaluation order.
CrowdState micro_step(const CrowdState& state, const std::vector<Vec2>& controls,
                      const ModelParams& p, const Scenario& sc,
                      const RandomSource& rng, const MicroOptions& opt = {},
                      StepDebug* dbg = nullptr);

// Sliding contact against wall segments: if the move old->pos crosses a wall,
// the position is pulled back to the wall face (contact tolerance 1e-3 plus
// half the wall thickness) and the normal velocity component is zeroed.
void resolve_walls(const Vec2& old_pos, Vec2& pos, Vec2& vel,
                   const std::vector<Wall>& obstacles);

// Freeze followers whose proposed position comes within `diameter` of any
// other active follower's proposed or old position.  Single pass; the
// decision for each follower depends only on the two input states.
CrowdState hard_sphere_filter(const CrowdState& old_state, const CrowdState& proposed,
                              double diameter);

}  // namespace crowd

#endif
