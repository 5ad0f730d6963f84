#ifndef CROWD_METRICS_HPP
#define CROWD_METRICS_HPP

#include <span>
#include <vector>

#include "crowd/ensemble.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"

namespace crowd {

// Per-step observables recorded during a run.
struct StepStats {
    long step = 0;
    double time = 0.0;
    double active = 0.0;          // active follower count (micro) or mass (meso)
    double occupancy = 0.0;       // count/mass currently inside Sigma
    double evac_fraction = 0.0;
    double polarization = 0.0;    // |sum v_i/|v_i|| / n over nonzero velocities
    Vec2 mean_vhat{};             // mean normalized velocity
    int zero_excluded = 0;        // zero-velocity followers left out of the above
};

// Count of active followers inside Sigma.
double occupancy_of_sigma(const CrowdState& state, const Scenario& sc);
// Mass of active samples inside Sigma.
double occupancy_of_sigma(const ParticleEnsemble& ens, const Scenario& sc);

double evacuated_fraction(double current, double initial);

// Polarization snapshot of the active followers.
void polarization_sample(const CrowdState& state, StepStats& out);

// True when polarization stays >= phi_threshold and the mean normalized
// velocity keeps a component >= dir_threshold along `direction` for `window`
// consecutive recorded steps, anywhere in the record.
bool consensus_detector(std::span<const StepStats> series, const Vec2& direction,
                        int window, double phi_threshold = 0.95,
                        double dir_threshold = 0.9);

struct ReplicateOutcome {
    bool success = false;
    int evac_step = -1;
    double evac_fraction = 0.0;
    std::uint64_t seed = 0;
};

// Fraction of failed replicates; rejects an empty batch.
double failure_rate(std::span<const ReplicateOutcome> outcomes);

struct MeanCi {
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double half_width = 0.0;  // 95% normal interval
};
MeanCi mean_ci(std::span<const double> values);

// 95% half-width of a binomial proportion over n trials.
double binomial_ci_half_width(double p, int n);

double median(std::vector<double> values);

}  // namespace crowd

#endif
