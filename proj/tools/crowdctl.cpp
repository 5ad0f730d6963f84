// crowdctl: run, sweep and reproduce crowd evacuation experiments.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowd/config.hpp"
#include "crowd/io.hpp"
#include "crowd/runner.hpp"

namespace {

using namespace crowd;

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string mode;
    std::string strategy;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out = "out";
    bool deterministic = false;
    int followers = -1;
    int leaders = -1;
    int horizon = -1;
    int iterations = -1;
    int nmpc = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "configuration file (JSON)");
    cmd->add_option("--preset", a.preset, "built-in preset name");
    cmd->add_option("--mode", a.mode, "micro | meso");
    cmd->add_option("--strategy", a.strategy,
                    "go-to-target | compass | mpc | zero | <strategy file>");
    auto* s = cmd->add_option("--seed", a.seed, "run seed");
    s->each([&a](const std::string&) { a.has_seed = true; });
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_flag("--deterministic", a.deterministic,
                  "record and enforce deterministic re-run mode");
    cmd->add_option("--followers", a.followers, "override follower count");
    cmd->add_option("--leaders", a.leaders, "override leader count");
    cmd->add_option("--horizon", a.horizon, "override horizon steps");
    cmd->add_option("--iterations", a.iterations, "override compass iterations");
    cmd->add_option("--nmpc", a.nmpc, "override MPC horizon");
}

Config build_config(const CommonArgs& a) {
    Config c;
    if (!a.config_path.empty()) {
        c = load_config(a.config_path);
    } else if (!a.preset.empty()) {
        c = preset_config(a.preset);
    } else {
        throw ConfigError("either --config or --preset is required");
    }
    if (!a.mode.empty()) c.mode = a.mode;
    if (!a.strategy.empty()) c.strategy_source = a.strategy;
    if (a.has_seed) c.seed = a.seed;
    if (a.followers >= 0) c.n_followers = a.followers;
    if (a.leaders >= 0) {
        c.n_leaders = a.leaders;
        // keep an embedded piecewise strategy consistent with the new count
        if (c.has_embedded_strategy &&
            c.embedded_strategy.kind == LeaderStrategy::Kind::PiecewiseConstant) {
            for (auto& row : c.embedded_strategy.velocities) {
                row.resize(static_cast<size_t>(std::max(a.leaders, 0)),
                           row.empty() ? Vec2{0.0, 0.0} : row[0]);
            }
        }
    }
    if (a.horizon > 0) c.scenario.horizon_steps = a.horizon;
    if (a.iterations >= 0) c.compass.iterations = a.iterations;
    if (a.nmpc > 1) c.mpc.n_mpc = a.nmpc;
    c.deterministic = a.deterministic || c.deterministic;
    validate_config(c);
    return c;
}

int cmd_run(const CommonArgs& a) {
    Config c = build_config(a);
    SimResult r = run_experiment(c, a.out);
    std::cout << "mode " << c.mode << ", seed " << c.seed << "\n";
    if (r.evac_step >= 0)
        std::cout << "evacuated in " << r.evac_step << " steps ("
                  << fmt9(r.evac_step * c.sim_dt()) << " time units)\n";
    else
        std::cout << "not fully evacuated within " << c.scenario.horizon_steps
                  << " steps (fraction " << fmt9(r.evac_fraction) << ")\n";
    std::cout << "evacuated fraction " << fmt9(r.evac_fraction) << "\n";
    std::cout << "consensus " << (r.consensus ? "yes" : "no") << "\n";
    if (r.degenerate_balls > 0)
        std::cerr << "warning: " << r.degenerate_balls
                  << " degenerate topological-ball queries\n";
    std::cout << "outputs in " << a.out << "\n";
    return 0;
}

int cmd_sweep(const CommonArgs& a, int replicates, const std::string& leaders_list,
              int success_margin) {
    Config base = build_config(a);
    std::vector<int> leader_counts;
    if (leaders_list.empty()) {
        leader_counts.push_back(base.n_leaders);
    } else {
        std::stringstream ss(leaders_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) leader_counts.push_back(std::stoi(tok));
    }

    namespace fs = std::filesystem;
    fs::create_directories(a.out);
    std::ofstream csv(a.out + "/replicates.csv");
    csv << "leaders,replicate,seed,success,evac_step,threshold_step,evac_fraction,consensus\n";

    nlohmann::json groups = nlohmann::json::array();
    for (int nl : leader_counts) {
        CommonArgs ga = a;
        ga.leaders = nl;
        Config c = build_config(ga);
        LeaderStrategy strategy = resolve_strategy(c);

        std::vector<ReplicateOutcome> outcomes;
        std::vector<double> evac_steps, fractions;
        int consensus_count = 0;
        for (int i = 0; i < replicates; ++i) {
            const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
            RunOptions opt;
            opt.record_series = true;
            if (success_margin >= 0) opt.stop_at_evacuated = c.n_followers - success_margin;
            SimResult r = run_sim(c, strategy, seed, opt);
            ReplicateOutcome o;
            o.seed = seed;
            o.evac_step = success_margin >= 0 ? r.threshold_step : r.evac_step;
            o.success = o.evac_step >= 0;
            o.evac_fraction = r.evac_fraction;
            outcomes.push_back(o);
            if (o.success) evac_steps.push_back(o.evac_step);
            fractions.push_back(r.evac_fraction);
            consensus_count += r.consensus ? 1 : 0;
            csv << nl << ',' << i << ',' << seed << ',' << (o.success ? 1 : 0) << ','
                << r.evac_step << ',' << r.threshold_step << ',' << fmt9(r.evac_fraction)
                << ',' << (r.consensus ? 1 : 0) << '\n';
        }
        const double fail = failure_rate(outcomes);
        MeanCi frac_ci = mean_ci(fractions);
        nlohmann::json g;
        g["leaders"] = nl;
        g["replicates"] = replicates;
        g["failure_rate"] = round9(fail);
        g["failure_ci95"] = round9(binomial_ci_half_width(fail, replicates));
        g["consensus_rate"] = round9(static_cast<double>(consensus_count) / replicates);
        g["evac_fraction_mean"] = round9(frac_ci.mean);
        g["evac_fraction_ci95"] = round9(frac_ci.half_width);
        if (!evac_steps.empty()) {
            MeanCi st = mean_ci(evac_steps);
            g["evac_steps_mean"] = round9(st.mean);
            g["evac_steps_median"] = round9(median(evac_steps));
        }
        groups.push_back(std::move(g));
        std::cout << "leaders " << nl << ": failure rate " << fmt9(fail) << ", consensus rate "
                  << fmt9(static_cast<double>(consensus_count) / replicates) << "\n";
    }

    nlohmann::json summary;
    summary["groups"] = std::move(groups);
    summary["success_margin"] = success_margin;
    summary["replicates"] = replicates;
    summary["base_seed"] = base.seed;
    write_json(summary, a.out + "/sweep_summary.json");
    std::cout << "outputs in " << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdctl: multiscale crowd evacuation experiments"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "single experiment with outputs");
    add_common(run, run_args);

    CommonArgs sweep_args;
    int replicates = 20;
    std::string leaders_list;
    int success_margin = -1;
    CLI::App* sweep = app.add_subcommand("sweep", "replicate sweep with aggregate tables");
    add_common(sweep, sweep_args);
    sweep->add_option("--replicates", replicates, "replicates per group");
    sweep->add_option("--leader-counts", leaders_list, "comma-separated leader counts");
    sweep->add_option("--success-margin", success_margin,
                      "success when followers-margin have left (-1: all must leave)");

    std::string manifest_path, rerun_out = "out-rerun";
    CLI::App* rerun = app.add_subcommand("rerun", "reproduce a run from its manifest");
    rerun->add_option("--manifest", manifest_path, "manifest.json path")->required();
    rerun->add_option("--out", rerun_out, "output directory");

    CLI::App* presets = app.add_subcommand("presets", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) return cmd_run(run_args);
        if (app.got_subcommand(sweep))
            return cmd_sweep(sweep_args, replicates, leaders_list, success_margin);
        if (app.got_subcommand(rerun)) {
            rerun_manifest(manifest_path, rerun_out);
            std::cout << "outputs in " << rerun_out << "\n";
            return 0;
        }
        if (app.got_subcommand(presets)) {
            for (const auto& n : preset_names()) std::cout << n << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
