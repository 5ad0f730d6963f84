#ifndef CROWD_STATE_HPP
#define CROWD_STATE_HPP

#include <vector>

#include "crowd/vec2.hpp"

namespace crowd {

struct FollowerState {
    Vec2 position{};
    Vec2 velocity{};
    bool evacuated = false;  // evacuated agents exert no forces and receive none
};

// Leaders obey a first-order model: velocity is an output of the dynamics,
// stored here so followers can align with it within the same step.  A leader
// that reaches the exit leaves the domain like anyone else.
struct LeaderState {
    Vec2 position{};
    Vec2 velocity{};
    bool evacuated = false;
};

struct CrowdState {
    std::vector<FollowerState> followers;
    std::vector<LeaderState> leaders;
    double time = 0.0;
    long step = 0;

    int active_followers() const {
        int n = 0;
        for (const auto& f : followers) n += f.evacuated ? 0 : 1;
        return n;
    }
    int evacuated_followers() const {
        return static_cast<int>(followers.size()) - active_followers();
    }
};

}  // namespace crowd

#endif
