#include "crowd/compass.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowd {

CompassResult compass_search(const std::function<double(const LeaderStrategy&)>& objective,
                             const LeaderStrategy& init, double max_variation,
                             int iterations, RandomSource rng, int stall_limit) {
    if (init.kind != LeaderStrategy::Kind::PiecewiseConstant || init.n_slots() == 0)
        throw std::invalid_argument("compass_search: piecewise-constant strategy required");

    CompassResult res;
    res.best = init;
    double best_cost = objective(init);
    res.history.push_back({0, best_cost, false});

    const int slots = init.n_slots();
    const int leaders = init.n_leaders();
    int stall = 0;
    for (int it = 1; it <= iterations; ++it) {
        LeaderStrategy cand = res.best;
        const int slot = rng.uniform_int(slots);
        const int k = leaders > 0 ? rng.uniform_int(leaders) : 0;
        const int comp = rng.uniform_int(2);
        const double delta = rng.uniform(-max_variation, max_variation);
        if (leaders > 0) {
            Vec2& u = cand.velocities[slot][k];
            double& c = (comp == 0) ? u.x : u.y;
            c = std::clamp(c + delta, -cand.u_bound, cand.u_bound);
        }
        const double cost = objective(cand);
        const bool accept = cost < best_cost;
        if (accept) {
            res.best = std::move(cand);
            best_cost = cost;
            res.accepted++;
            stall = 0;
        } else {
            stall++;
        }
        res.history.push_back({it, best_cost, accept});
        if (stall >= stall_limit) break;
    }
    return res;
}

}  // namespace crowd
