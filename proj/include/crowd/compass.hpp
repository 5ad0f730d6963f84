#ifndef CROWD_COMPASS_HPP
#define CROWD_COMPASS_HPP

#include <functional>

#include "crowd/rng.hpp"
#include "crowd/strategy.hpp"

namespace crowd {

struct CompassEntry {
    int iteration = 0;
    double cost = 0.0;
    bool accepted = false;
};

struct CompassResult {
    LeaderStrategy best;
    std::vector<CompassEntry> history;  // entry 0 is the initial cost
    int accepted = 0;
};

// Derivative-free search over the piecewise-constant velocity matrix.  Each
// iteration perturbs one randomly chosen (slot, leader, component) by a
// uniform draw in [-max_variation, max_variation], clips to the box, and
// keeps the change only if the objective strictly decreases.  The objective
// must be deterministic (evaluate candidates under common random numbers).
// Stops after `iterations` proposals or `stall_limit` consecutive rejections.
CompassResult compass_search(const std::function<double(const LeaderStrategy&)>& objective,
                             const LeaderStrategy& init, double max_variation,
                             int iterations, RandomSource rng, int stall_limit = 200);

}  // namespace crowd

#endif
