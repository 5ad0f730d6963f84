#ifndef CROWD_RUNNER_HPP
#define CROWD_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "crowd/compass.hpp"
#include "crowd/config.hpp"
#include "crowd/meso.hpp"
#include "crowd/metrics.hpp"
#include "crowd/micro.hpp"
#include "crowd/mpc.hpp"
#include "crowd/runner_sinks.hpp"

namespace crowd {

struct SimResult {
    std::vector<StepStats> series;
    int evac_step = -1;          // first step with every follower out, -1 if never
    int threshold_step = -1;     // first step meeting stop_at_evacuated, -1 if never
    int stop_step = 0;           // last executed step
    double initial_amount = 0.0; // follower count (micro) or mass (meso)
    double final_amount = 0.0;
    double evac_fraction = 0.0;
    double evac_time_value = 0.0;  // evac_time_cost of the run
    bool consensus = false;
    long degenerate_balls = 0;
    double max_control_abs = 0.0;
    CrowdState final_state;        // micro mode
    ParticleEnsemble final_ensemble;  // meso mode
};

struct RunOptions {
    bool early_stop = true;      // stop when nothing is left to evacuate
    int stop_at_evacuated = -1;  // optional earlier stop: evacuated count threshold
    bool record_series = true;
};

SimResult run_micro(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                    const RunOptions& opt = {}, RunSinks* sinks = nullptr);

SimResult run_meso(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                   const RunOptions& opt = {}, RunSinks* sinks = nullptr);

SimResult run_sim(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                  const RunOptions& opt = {}, RunSinks* sinks = nullptr);

// Objective evaluated under common random numbers (fixed seed): evacuation
// time for micro runs, remaining mass for meso runs.
double strategy_objective(const Config& c, const LeaderStrategy& strategy,
                          std::uint64_t seed);

// Compass initial guess: straight run from each leader's initial position
// toward the target.
LeaderStrategy compass_initial_guess(const Config& c, std::uint64_t seed);

// Resolve the configured strategy source; "compass" runs the optimization
// (history returned through `compass_out` when given).
LeaderStrategy resolve_strategy(const Config& c, CompassResult* compass_out = nullptr);

// Full experiment: resolve strategy, simulate, write trajectory/density
// outputs, metrics report and manifest into out_dir.  Returns the result of
// the final simulation.
SimResult run_experiment(const Config& c, const std::string& out_dir);

// Re-run from a manifest written by run_experiment.
SimResult rerun_manifest(const std::string& manifest_path, const std::string& out_dir);

}  // namespace crowd

#endif
