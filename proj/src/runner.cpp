#include "crowd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "crowd/costs.hpp"
#include "crowd/io.hpp"

namespace crowd {

namespace {

void record_micro_stats(const CrowdState& state, const Config& c, double initial,
                        std::vector<StepStats>& series) {
    StepStats s;
    s.step = state.step;
    s.time = state.time;
    s.active = state.active_followers();
    s.occupancy = occupancy_of_sigma(state, c.scenario);
    s.evac_fraction = initial > 0 ? evacuated_fraction(s.active, initial) : 0.0;
    polarization_sample(state, s);
    series.push_back(s);
}

void record_meso_stats(const ParticleEnsemble& ens, const Config& c, long step,
                       double initial, std::vector<StepStats>& series) {
    StepStats s;
    s.step = step;
    s.time = step * c.meso.dt;
    s.active = ens.total_mass;
    s.occupancy = occupancy_of_sigma(ens, c.scenario);
    s.evac_fraction = initial > 0 ? evacuated_fraction(ens.total_mass, initial) : 0.0;
    Vec2 sum{0.0, 0.0};
    int n = 0, zero = 0;
    for (const auto& p : ens.samples) {
        if (!p.active) continue;
        double v = p.velocity.norm();
        if (v == 0.0) { zero++; continue; }
        sum += p.velocity / v;
        n++;
    }
    s.zero_excluded = zero;
    if (n > 0) {
        s.mean_vhat = sum / static_cast<double>(n);
        s.polarization = s.mean_vhat.norm();
    }
    series.push_back(s);
}

double track_controls(const std::vector<Vec2>& u, double current) {
    for (const auto& v : u)
        current = std::max({current, std::abs(v.x), std::abs(v.y)});
    return current;
}

void maybe_dump_density(const ParticleEnsemble& ens, const Config& c, long step,
                        RunSinks* sinks) {
    if (!sinks || !sinks->density) return;
    if (step % sinks->density_every != 0) return;
    DensityGrid g = density_histogram(ens, sinks->grid_lo, sinks->grid_hi,
                                      sinks->grid_nx, sinks->grid_ny);
    g.time = step * c.meso.dt;
    write_density_dump(g, sinks->density_prefix + std::to_string(step) + ".txt");
}

}  // namespace

SimResult run_micro(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                    const RunOptions& opt, RunSinks* sinks) {
    const RandomSource rng(seed);
    CrowdState state = make_crowd(c, rng);
    const double initial = static_cast<double>(c.n_followers);

    MicroOptions mopt;
    mopt.hard_sphere = c.hard_sphere.enabled;
    mopt.diameter = c.hard_sphere.diameter;

    SimResult res;
    res.initial_amount = initial;
    StepDebug dbg;

    const bool use_mpc = strategy.kind == LeaderStrategy::Kind::MpcPolicy;
    MpcConfig mpc_cfg{c.mpc.n_mpc, c.mpc.inner_iterations, c.mpc.u_bound, c.mpc.fd_step};
    std::vector<double> warm(2 * c.n_leaders * c.mpc.n_mpc, 0.0);

    if (opt.record_series) record_micro_stats(state, c, initial, res.series);
    if (sinks && sinks->trajectory) sinks->trajectory->record(state);

    for (int step = 0; step < c.scenario.horizon_steps; ++step) {
        std::vector<Vec2> controls;
        if (use_mpc) {
            controls = mpc_step(state, mpc_cfg, c.costs, c.model, c.scenario, &warm);
            // shift the optimal sequence one block for the next warm start
            const size_t block = 2 * static_cast<size_t>(c.n_leaders);
            if (warm.size() >= block) {
                std::rotate(warm.begin(), warm.begin() + block, warm.end());
                std::fill(warm.end() - block, warm.end(), 0.0);
            }
        } else {
            controls = strategy_controls(strategy, state.step, state, c.scenario, rng);
        }
        res.max_control_abs = track_controls(controls, res.max_control_abs);

        state = micro_step(state, controls, c.model, c.scenario, rng, mopt, &dbg);

        if (opt.record_series) record_micro_stats(state, c, initial, res.series);
        if (sinks && sinks->trajectory && state.step % sinks->trajectory_every == 0)
            sinks->trajectory->record(state);

        res.stop_step = static_cast<int>(state.step);
        const int active = state.active_followers();
        if (res.evac_step < 0 && active == 0) res.evac_step = static_cast<int>(state.step);
        if (res.threshold_step < 0 && opt.stop_at_evacuated >= 0 &&
            state.evacuated_followers() >= opt.stop_at_evacuated)
            res.threshold_step = static_cast<int>(state.step);
        if (opt.early_stop && (active == 0 || res.threshold_step >= 0)) break;
    }

    res.final_state = state;
    res.final_amount = state.active_followers();
    res.evac_fraction = initial > 0 ? evacuated_fraction(res.final_amount, initial) : 0.0;
    res.evac_time_value = evac_time_cost(res.evac_step, c.scenario.horizon_steps, c.model.dt,
                                         1.0 - res.evac_fraction, c.evac_penalty_factor);
    res.degenerate_balls = dbg.degenerate_balls;
    res.consensus = consensus_detector(res.series, c.consensus.direction, c.consensus.window,
                                       c.consensus.phi_threshold, c.consensus.dir_threshold);
    return res;
}

SimResult run_meso(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                   const RunOptions& opt, RunSinks* sinks) {
    const RandomSource rng(seed);
    ParticleEnsemble ens = make_ensemble(c.meso.n_s, c.n_followers, c.scenario.spawn, rng);
    LeaderSwarm swarm;
    std::vector<Vec2> lp = initial_leader_positions(c);
    swarm.leaders.resize(c.n_leaders);
    for (int k = 0; k < c.n_leaders; ++k) swarm.leaders[k].position = lp[k];

    const double initial = ens.total_mass;
    SimResult res;
    res.initial_amount = initial;

    KineticOptions kopt;
    kopt.subsample = c.meso.subsample;
    kopt.grid_nx = c.meso.grid_nx;
    kopt.grid_ny = c.meso.grid_ny;
    kopt.use_grid = c.meso.use_grid;

    CrowdState mirror;  // leader view for the strategy
    mirror.leaders = swarm.leaders;

    if (opt.record_series) record_meso_stats(ens, c, 0, initial, res.series);
    maybe_dump_density(ens, c, 0, sinks);

    for (int step = 0; step < c.scenario.horizon_steps; ++step) {
        mirror.step = step;
        mirror.leaders = swarm.leaders;
        std::vector<Vec2> controls =
            strategy_controls(strategy, step, mirror, c.scenario, rng);
        res.max_control_abs = track_controls(controls, res.max_control_abs);

        const KineticScaling sc = KineticScaling::make(c.meso.epsilon, ens.total_mass,
                                                       swarm.mass(), c.model.sigma_sq);
        kinetic_step(ens, swarm, controls, c.meso.dt, step, sc, c.model, c.scenario, rng,
                     kopt);

        if (opt.record_series) record_meso_stats(ens, c, step + 1, initial, res.series);
        maybe_dump_density(ens, c, step + 1, sinks);

        res.stop_step = step + 1;
        if (res.evac_step < 0 && ens.active_count() == 0) res.evac_step = step + 1;
        if (opt.early_stop && ens.active_count() == 0) break;
    }

    if (sinks && !sinks->ensemble_path.empty()) write_ensemble_csv(ens, sinks->ensemble_path);

    res.final_amount = ens.total_mass;
    res.evac_fraction = evacuated_fraction(res.final_amount, initial);
    res.evac_time_value = evac_time_cost(res.evac_step, c.scenario.horizon_steps, c.meso.dt,
                                         1.0 - res.evac_fraction, c.evac_penalty_factor);
    res.consensus = consensus_detector(res.series, c.consensus.direction, c.consensus.window,
                                       c.consensus.phi_threshold, c.consensus.dir_threshold);
    res.final_ensemble = std::move(ens);
    return res;
}

SimResult run_sim(const Config& c, const LeaderStrategy& strategy, std::uint64_t seed,
                  const RunOptions& opt, RunSinks* sinks) {
    return c.mode == "meso" ? run_meso(c, strategy, seed, opt, sinks)
                            : run_micro(c, strategy, seed, opt, sinks);
}

double strategy_objective(const Config& c, const LeaderStrategy& strategy,
                          std::uint64_t seed) {
    RunOptions opt;
    opt.record_series = false;
    SimResult r = run_sim(c, strategy, seed, opt);
    return c.mode == "meso" ? r.final_amount : r.evac_time_value;
}

LeaderStrategy compass_initial_guess(const Config& c, std::uint64_t seed) {
    CrowdState st = make_crowd(c, RandomSource(seed));
    std::vector<Vec2> lp(st.leaders.size());
    for (size_t k = 0; k < lp.size(); ++k) lp[k] = st.leaders[k].position;
    return straight_line_strategy(lp, c.scenario.target, c.compass.switch_interval,
                                  c.scenario.horizon_steps, c.compass.u_bound);
}

LeaderStrategy resolve_strategy(const Config& c, CompassResult* compass_out) {
    const std::string& src = c.strategy_source;
    if (src == "go-to-target") {
        LeaderStrategy st;
        st.kind = LeaderStrategy::Kind::GoToTarget;
        return st;
    }
    if (src == "zero") {
        LeaderStrategy st;
        st.kind = LeaderStrategy::Kind::PiecewiseConstant;
        st.switch_interval = std::max(1, c.scenario.horizon_steps);
        st.u_bound = c.compass.u_bound;
        st.velocities = {std::vector<Vec2>(std::max(1, c.n_leaders), Vec2{0.0, 0.0})};
        return st;
    }
    if (src == "mpc") {
        LeaderStrategy st;
        st.kind = LeaderStrategy::Kind::MpcPolicy;
        return st;
    }
    if (src == "embedded") {
        if (!c.has_embedded_strategy)
            throw ConfigError("strategy_source 'embedded' but no strategy block present");
        return c.embedded_strategy;
    }
    if (src == "compass") {
        LeaderStrategy init = compass_initial_guess(c, c.seed);
        auto objective = [&](const LeaderStrategy& st) {
            return strategy_objective(c, st, c.seed);  // common random numbers
        };
        CompassResult r = compass_search(objective, init, c.compass.max_variation,
                                         c.compass.iterations,
                                         RandomSource(c.seed).at(rng_tag::compass),
                                         c.compass.stall_limit);
        if (compass_out) *compass_out = r;
        return compass_out ? compass_out->best : r.best;
    }
    // anything else is a strategy file path
    return load_strategy_file(src);
}

namespace {

nlohmann::json metrics_report(const Config& c, const SimResult& r) {
    nlohmann::json j;
    j["mode"] = c.mode;
    j["preset"] = c.preset;
    j["seed"] = c.seed;
    j["scalars"] = {
        {"initial", round9(r.initial_amount)},
        {"final", round9(r.final_amount)},
        {"evacuated_fraction", round9(r.evac_fraction)},
        {"evac_step", r.evac_step},
        {"evac_time_cost", round9(r.evac_time_value)},
        {"consensus", r.consensus},
        {"stop_step", r.stop_step},
        {"degenerate_balls", r.degenerate_balls},
        {"max_control_abs", round9(r.max_control_abs)},
    };
    j["series"] = series_to_json(r.series);
    return j;
}

}  // namespace

SimResult run_experiment(const Config& c, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string base = out_dir + "/";

    CompassResult compass;
    const bool is_compass = c.strategy_source == "compass";
    LeaderStrategy strategy = resolve_strategy(c, is_compass ? &compass : nullptr);
    if (is_compass) {
        write_cost_history_csv(compass.history, base + "compass_history.csv");
        save_strategy_file(compass.best, base + "strategy_best.json");
    }
    if (strategy.kind != LeaderStrategy::Kind::MpcPolicy)
        save_strategy_file(strategy, base + "strategy_used.json");

    RunSinks sinks;
    if (c.mode == "micro" && c.output.trajectory) {
        sinks.trajectory = std::make_unique<TrajectoryWriter>(base + "trajectory.csv");
        sinks.trajectory_every = c.output.trajectory_every;
    }
    if (c.mode == "meso") {
        sinks.density = c.output.density;
        sinks.density_every = c.output.density_every;
        sinks.grid_lo = c.output.grid_lo;
        sinks.grid_hi = c.output.grid_hi;
        sinks.grid_nx = c.output.grid_nx;
        sinks.grid_ny = c.output.grid_ny;
        sinks.density_prefix = base + "density_";
        if (c.output.ensemble_checkpoint) sinks.ensemble_path = base + "ensemble_final.csv";
    }

    SimResult res = run_sim(c, strategy, c.seed, RunOptions{}, &sinks);

    const nlohmann::json cfg_json = config_to_json(c);
    write_json(cfg_json, base + "config.json");
    write_json(metrics_report(c, res), base + "metrics.json");

    nlohmann::json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["config_hash"] = std::to_string(fnv1a64(cfg_json.dump()));
    manifest["seed"] = c.seed;
    manifest["mode"] = c.mode;
    manifest["deterministic"] = c.deterministic;
    manifest["config"] = cfg_json;
    write_json(manifest, base + "manifest.json");
    return res;
}

SimResult rerun_manifest(const std::string& manifest_path, const std::string& out_dir) {
    nlohmann::json manifest = read_json(manifest_path);
    if (!manifest.contains("config"))
        throw ConfigError("manifest missing 'config': " + manifest_path);
    Config c = config_from_json(manifest["config"]);
    return run_experiment(c, out_dir);
}

}  // namespace crowd
