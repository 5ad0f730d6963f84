#ifndef CROWD_COSTS_HPP
#define CROWD_COSTS_HPP

#include <vector>

#include "crowd/ensemble.hpp"
#include "crowd/state.hpp"
#include "crowd/vec2.hpp"

namespace crowd {

struct CostWeights {
    double mu_f = 1.0;
    double mu_l = 1e-5;
    double nu = 1e-5;
};

// Quadratic running cost: target tracking over active followers, crowd
// contact for the leaders, and a control penalty.
double running_cost(const CrowdState& state, const std::vector<Vec2>& controls,
                    const CostWeights& w, const Vec2& target);

// Evacuation time in model time units: first step at which every follower is
// out, times dt.  Runs that never evacuate are ranked by a finite penalty:
// horizon*dt + penalty_factor*horizon*dt*(fraction still inside).
double evac_time_cost(int evac_step, int horizon_steps, double dt,
                      double unevacuated_fraction, double penalty_factor = 10.0);

// Mass still inside at final time; lower is better.
inline double evac_mass_cost(const ParticleEnsemble& ens) { return ens.total_mass; }

}  // namespace crowd

#endif
