#include "crowd/costs.hpp"

namespace crowd {

double running_cost(const CrowdState& state, const std::vector<Vec2>& controls,
                    const CostWeights& w, const Vec2& target) {
    double jf = 0.0, jl = 0.0, ju = 0.0;
    for (const auto& f : state.followers) {
        if (f.evacuated) continue;
        jf += dist_sq(f.position, target);
        for (const auto& l : state.leaders)
            if (!l.evacuated) jl += dist_sq(f.position, l.position);
    }
    for (const auto& u : controls) ju += u.norm_sq();
    return w.mu_f * jf + w.mu_l * jl + w.nu * ju;
}

double evac_time_cost(int evac_step, int horizon_steps, double dt,
                      double unevacuated_fraction, double penalty_factor) {
    if (evac_step >= 0) return evac_step * dt;
    return horizon_steps * dt + penalty_factor * horizon_steps * dt * unevacuated_fraction;
}

}  // namespace crowd
