#ifndef CROWD_CONFIG_HPP
#define CROWD_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crowd/costs.hpp"
#include "crowd/params.hpp"
#include "crowd/scenario.hpp"
#include "crowd/strategy.hpp"

namespace crowd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MesoConfig {
    int n_s = 10000;
    double epsilon = 0.02;
    double dt = 0.01;
    int subsample = 1000;
    int grid_nx = 48;
    int grid_ny = 48;
    bool use_grid = true;
};

struct HardSphereConfig {
    bool enabled = false;
    double diameter = 0.25;
};

struct CompassConfig {
    int iterations = 50;
    int switch_interval = 20;
    double max_variation = 1.0;
    double u_bound = 1.0;
    int stall_limit = 200;
};

struct MpcSettings {
    int n_mpc = 2;
    int inner_iterations = 50;
    double u_bound = 1.0;
    double fd_step = 1e-3;
};

struct ConsensusConfig {
    double phi_threshold = 0.95;
    double dir_threshold = 0.9;
    int window = 50;
    Vec2 direction{1.0, 0.0};
};

struct LeaderInit {
    enum class Kind { Column, UniformInSpawn, StratifiedInSpawn, Fixed, NearExit };
    Kind kind = Kind::Column;
    double x = 16.5;        // column
    double y_lo = 8.5;
    double y_hi = 11.5;
    Vec2 center{};          // near-exit column center
    double spacing = 0.45;
    std::vector<Vec2> positions;  // fixed
};

struct OutputConfig {
    bool trajectory = true;
    int trajectory_every = 1;
    bool density = false;
    int density_every = 500;
    Vec2 grid_lo{0.0, 0.0};
    Vec2 grid_hi{40.0, 20.0};
    int grid_nx = 80;
    int grid_ny = 40;
    bool ensemble_checkpoint = true;
};

struct Config {
    std::string preset;         // preset this config was derived from, if any
    std::string mode = "micro"; // micro | meso
    std::uint64_t seed = 1;
    int n_followers = 150;
    int n_leaders = 3;
    ModelParams model;
    Scenario scenario;
    LeaderInit leader_init;
    MesoConfig meso;
    HardSphereConfig hard_sphere;
    CostWeights costs;
    double evac_penalty_factor = 10.0;
    CompassConfig compass;
    MpcSettings mpc;
    ConsensusConfig consensus;
    std::string strategy_source = "go-to-target";  // go-to-target|compass|mpc|zero|embedded|<file>
    LeaderStrategy embedded_strategy;
    bool has_embedded_strategy = false;
    OutputConfig output;
    bool deterministic = false;

    double sim_dt() const { return mode == "meso" ? meso.dt : model.dt; }
};

// Built-in experiment presets: setting0 (open-space herding), setting1
// (point exit with visibility disk), setting1-meso (kinetic version),
// setting2 (room + hidden exit, approximate geometry), setting3 (door
// bottleneck with hard spheres and smart obstacles).
Config preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Load from JSON text; an optional "preset" key selects the base the
// remaining keys override.  Rejects unknown keys and out-of-range values
// with a field-level message, and re-validates the merged result.
Config load_config(const std::string& path);
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);
void validate_config(const Config& c);

LeaderStrategy strategy_from_json(const nlohmann::json& j, const std::string& path_hint);
nlohmann::json strategy_to_json(const LeaderStrategy& st);
LeaderStrategy load_strategy_file(const std::string& path);
void save_strategy_file(const LeaderStrategy& st, const std::string& path);

// Initial conditions.
std::vector<Vec2> initial_leader_positions(const Config& c);
CrowdState make_crowd(const Config& c, const RandomSource& rng);

}  // namespace crowd

#endif
