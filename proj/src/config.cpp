#include "crowd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace crowd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) fail(path + "." + it.key(), "unknown key");
    }
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vec2 get_vec2(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
    return {get_num(j[0], path + "[0]"), get_num(j[1], path + "[1]")};
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }

void apply_model(ModelParams& m, const json& j, const std::string& path) {
    check_keys(j, path, {"n_topo", "c_r_f", "c_r_l", "c_a", "c_z", "c_tau", "c_s",
                         "s_sq", "r", "zeta", "gamma", "sigma_sq", "dt", "v_max"});
    if (j.contains("n_topo")) m.n_topo = get_int(j["n_topo"], path + ".n_topo");
    if (j.contains("c_r_f")) m.c_r_f = get_num(j["c_r_f"], path + ".c_r_f");
    if (j.contains("c_r_l")) m.c_r_l = get_num(j["c_r_l"], path + ".c_r_l");
    if (j.contains("c_a")) m.c_a = get_num(j["c_a"], path + ".c_a");
    if (j.contains("c_z")) m.c_z = get_num(j["c_z"], path + ".c_z");
    if (j.contains("c_tau")) m.c_tau = get_num(j["c_tau"], path + ".c_tau");
    if (j.contains("c_s")) m.c_s = get_num(j["c_s"], path + ".c_s");
    if (j.contains("s_sq")) m.s_sq = get_num(j["s_sq"], path + ".s_sq");
    if (j.contains("r")) m.r = get_num(j["r"], path + ".r");
    if (j.contains("zeta")) m.zeta = get_num(j["zeta"], path + ".zeta");
    if (j.contains("gamma")) m.gamma = get_num(j["gamma"], path + ".gamma");
    if (j.contains("sigma_sq")) m.sigma_sq = get_num(j["sigma_sq"], path + ".sigma_sq");
    if (j.contains("dt")) m.dt = get_num(j["dt"], path + ".dt");
    if (j.contains("v_max")) m.v_max = get_num(j["v_max"], path + ".v_max");
}

void apply_visibility(VisibilityRegion& v, const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "center", "radius", "point", "normal"});
    const std::string kind = get_str(j.at("kind"), path + ".kind");
    if (kind == "everywhere") {
        v.kind = VisibilityRegion::Kind::Everywhere;
    } else if (kind == "nowhere") {
        v.kind = VisibilityRegion::Kind::Nowhere;
    } else if (kind == "disk") {
        v.kind = VisibilityRegion::Kind::Disk;
        v.center = get_vec2(j.at("center"), path + ".center");
        v.radius = get_num(j.at("radius"), path + ".radius");
    } else if (kind == "half_plane") {
        v.kind = VisibilityRegion::Kind::HalfPlane;
        v.center = get_vec2(j.at("point"), path + ".point");
        v.normal = get_vec2(j.at("normal"), path + ".normal");
    } else {
        fail(path + ".kind", "unknown visibility kind '" + kind + "'");
    }
}

void apply_exit(ExitPredicate& e, const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "point", "radius", "a", "b"});
    const std::string kind = get_str(j.at("kind"), path + ".kind");
    if (kind == "none") {
        e.kind = ExitPredicate::Kind::None;
    } else if (kind == "point_capture") {
        e.kind = ExitPredicate::Kind::PointCapture;
        e.point = get_vec2(j.at("point"), path + ".point");
        if (j.contains("radius")) e.capture_radius = get_num(j["radius"], path + ".radius");
    } else if (kind == "segment") {
        e.kind = ExitPredicate::Kind::SegmentCrossing;
        e.a = get_vec2(j.at("a"), path + ".a");
        e.b = get_vec2(j.at("b"), path + ".b");
    } else {
        fail(path + ".kind", "unknown exit kind '" + kind + "'");
    }
}

void apply_scenario(Scenario& s, const json& j, const std::string& path) {
    check_keys(j, path, {"target", "visibility", "obstacles", "exit", "spawn",
                         "horizon_steps"});
    if (j.contains("target")) s.target = get_vec2(j["target"], path + ".target");
    if (j.contains("visibility")) apply_visibility(s.visibility, j["visibility"], path + ".visibility");
    if (j.contains("obstacles")) {
        const json& arr = j["obstacles"];
        if (!arr.is_array()) fail(path + ".obstacles", "expected an array");
        s.obstacles.clear();
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string wp = path + ".obstacles[" + std::to_string(i) + "]";
            check_keys(arr[i], wp, {"a", "b", "thickness"});
            Wall w;
            w.a = get_vec2(arr[i].at("a"), wp + ".a");
            w.b = get_vec2(arr[i].at("b"), wp + ".b");
            if (arr[i].contains("thickness"))
                w.thickness = get_num(arr[i]["thickness"], wp + ".thickness");
            s.obstacles.push_back(w);
        }
    }
    if (j.contains("exit")) apply_exit(s.exit, j["exit"], path + ".exit");
    if (j.contains("spawn")) {
        const std::string sp = path + ".spawn";
        check_keys(j["spawn"], sp, {"box", "velocity"});
        const json& box = j["spawn"].at("box");
        if (!box.is_array() || box.size() != 4) fail(sp + ".box", "expected [x0, y0, x1, y1]");
        s.spawn.lo = {get_num(box[0], sp), get_num(box[1], sp)};
        s.spawn.hi = {get_num(box[2], sp), get_num(box[3], sp)};
        if (j["spawn"].contains("velocity")) {
            const std::string v = get_str(j["spawn"]["velocity"], sp + ".velocity");
            if (v == "zero") s.spawn.velocity = SpawnSpec::VelocityRule::Zero;
            else if (v == "random_direction")
                s.spawn.velocity = SpawnSpec::VelocityRule::RandomDirection;
            else fail(sp + ".velocity", "unknown velocity rule '" + v + "'");
        }
    }
    if (j.contains("horizon_steps"))
        s.horizon_steps = get_int(j["horizon_steps"], path + ".horizon_steps");
}

void apply_leader_init(LeaderInit& li, const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "x", "y_lo", "y_hi", "center", "spacing", "positions"});
    const std::string kind = get_str(j.at("kind"), path + ".kind");
    if (kind == "column") {
        li.kind = LeaderInit::Kind::Column;
        li.x = get_num(j.at("x"), path + ".x");
        li.y_lo = get_num(j.at("y_lo"), path + ".y_lo");
        li.y_hi = get_num(j.at("y_hi"), path + ".y_hi");
    } else if (kind == "uniform_in_spawn") {
        li.kind = LeaderInit::Kind::UniformInSpawn;
    } else if (kind == "stratified_in_spawn") {
        li.kind = LeaderInit::Kind::StratifiedInSpawn;
    } else if (kind == "near_exit") {
        li.kind = LeaderInit::Kind::NearExit;
        li.center = get_vec2(j.at("center"), path + ".center");
        if (j.contains("spacing")) li.spacing = get_num(j["spacing"], path + ".spacing");
    } else if (kind == "fixed") {
        li.kind = LeaderInit::Kind::Fixed;
        const json& arr = j.at("positions");
        if (!arr.is_array()) fail(path + ".positions", "expected an array");
        li.positions.clear();
        for (size_t i = 0; i < arr.size(); ++i)
            li.positions.push_back(get_vec2(arr[i], path + ".positions"));
    } else {
        fail(path + ".kind", "unknown leader_init kind '" + kind + "'");
    }
}

}  // namespace

LeaderStrategy strategy_from_json(const json& j, const std::string& path) {
    LeaderStrategy st;
    check_keys(j, path, {"kind", "switch_interval", "u_bound", "velocities",
                         "speed_bound", "tether_center", "tether_radius"});
    const std::string kind = get_str(j.at("kind"), path + ".kind");
    if (kind == "go_to_target") {
        st.kind = LeaderStrategy::Kind::GoToTarget;
    } else if (kind == "mpc") {
        st.kind = LeaderStrategy::Kind::MpcPolicy;
    } else if (kind == "random_near_exit") {
        st.kind = LeaderStrategy::Kind::RandomNearExit;
        if (j.contains("speed_bound"))
            st.speed_bound = get_num(j["speed_bound"], path + ".speed_bound");
        st.tether_center = get_vec2(j.at("tether_center"), path + ".tether_center");
        if (j.contains("tether_radius"))
            st.tether_radius = get_num(j["tether_radius"], path + ".tether_radius");
    } else if (kind == "piecewise_constant") {
        st.kind = LeaderStrategy::Kind::PiecewiseConstant;
        st.switch_interval = get_int(j.at("switch_interval"), path + ".switch_interval");
        if (st.switch_interval < 1) fail(path + ".switch_interval", "must be >= 1");
        if (j.contains("u_bound")) st.u_bound = get_num(j["u_bound"], path + ".u_bound");
        const json& arr = j.at("velocities");
        if (!arr.is_array() || arr.empty()) fail(path + ".velocities", "expected [slot][leader] velocities");
        st.velocities.clear();
        for (size_t s = 0; s < arr.size(); ++s) {
            if (!arr[s].is_array()) fail(path + ".velocities", "expected [slot][leader] pairs");
            std::vector<Vec2> row;
            for (size_t k = 0; k < arr[s].size(); ++k)
                row.push_back(get_vec2(arr[s][k], path + ".velocities"));
            if (!st.velocities.empty() && row.size() != st.velocities[0].size())
                fail(path + ".velocities", "ragged leader dimension");
            st.velocities.push_back(std::move(row));
        }
        if (!st.within_box())
            fail(path + ".velocities", "entry exceeds the box bound u_bound");
    } else {
        fail(path + ".kind", "unknown strategy kind '" + kind + "'");
    }
    return st;
}

json strategy_to_json(const LeaderStrategy& st) {
    json j;
    switch (st.kind) {
        case LeaderStrategy::Kind::GoToTarget:
            j["kind"] = "go_to_target";
            break;
        case LeaderStrategy::Kind::MpcPolicy:
            j["kind"] = "mpc";
            break;
        case LeaderStrategy::Kind::RandomNearExit:
            j["kind"] = "random_near_exit";
            j["speed_bound"] = st.speed_bound;
            j["tether_center"] = vec2_json(st.tether_center);
            j["tether_radius"] = st.tether_radius;
            break;
        case LeaderStrategy::Kind::PiecewiseConstant: {
            j["kind"] = "piecewise_constant";
            j["switch_interval"] = st.switch_interval;
            j["u_bound"] = st.u_bound;
            json slots = json::array();
            for (const auto& row : st.velocities) {
                json r = json::array();
                for (const auto& u : row) r.push_back(vec2_json(u));
                slots.push_back(std::move(r));
            }
            j["velocities"] = std::move(slots);
            break;
        }
    }
    return j;
}

LeaderStrategy load_strategy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("strategy file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("strategy file " + path + ": " + e.what());
    }
    return strategy_from_json(j, "strategy");
}

void save_strategy_file(const LeaderStrategy& st, const std::string& path) {
    std::ofstream out(path);
    out << strategy_to_json(st).dump(2) << "\n";
}

Config config_from_json(const json& j) {
    check_keys(j, "$", {"preset", "mode", "seed", "n_followers", "n_leaders", "model",
                        "scenario", "leader_init", "meso", "hard_sphere", "costs",
                        "evac_penalty_factor", "compass", "mpc", "consensus", "strategy",
                        "strategy_source", "output", "deterministic"});
    Config c;
    if (j.contains("preset")) c = preset_config(get_str(j["preset"], "$.preset"));

    if (j.contains("mode")) c.mode = get_str(j["mode"], "$.mode");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("$.seed", "expected an integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_followers")) c.n_followers = get_int(j["n_followers"], "$.n_followers");
    if (j.contains("n_leaders")) c.n_leaders = get_int(j["n_leaders"], "$.n_leaders");
    if (j.contains("model")) apply_model(c.model, j["model"], "$.model");
    if (j.contains("scenario")) apply_scenario(c.scenario, j["scenario"], "$.scenario");
    if (j.contains("leader_init")) apply_leader_init(c.leader_init, j["leader_init"], "$.leader_init");
    if (j.contains("meso")) {
        const json& m = j["meso"];
        check_keys(m, "$.meso", {"n_s", "epsilon", "dt", "subsample", "grid_nx", "grid_ny",
                                 "use_grid"});
        if (m.contains("n_s")) c.meso.n_s = get_int(m["n_s"], "$.meso.n_s");
        if (m.contains("epsilon")) c.meso.epsilon = get_num(m["epsilon"], "$.meso.epsilon");
        if (m.contains("dt")) c.meso.dt = get_num(m["dt"], "$.meso.dt");
        if (m.contains("subsample")) c.meso.subsample = get_int(m["subsample"], "$.meso.subsample");
        if (m.contains("grid_nx")) c.meso.grid_nx = get_int(m["grid_nx"], "$.meso.grid_nx");
        if (m.contains("grid_ny")) c.meso.grid_ny = get_int(m["grid_ny"], "$.meso.grid_ny");
        if (m.contains("use_grid")) c.meso.use_grid = get_bool(m["use_grid"], "$.meso.use_grid");
    }
    if (j.contains("hard_sphere")) {
        const json& h = j["hard_sphere"];
        check_keys(h, "$.hard_sphere", {"enabled", "diameter"});
        if (h.contains("enabled")) c.hard_sphere.enabled = get_bool(h["enabled"], "$.hard_sphere.enabled");
        if (h.contains("diameter")) c.hard_sphere.diameter = get_num(h["diameter"], "$.hard_sphere.diameter");
    }
    if (j.contains("costs")) {
        const json& w = j["costs"];
        check_keys(w, "$.costs", {"mu_f", "mu_l", "nu"});
        if (w.contains("mu_f")) c.costs.mu_f = get_num(w["mu_f"], "$.costs.mu_f");
        if (w.contains("mu_l")) c.costs.mu_l = get_num(w["mu_l"], "$.costs.mu_l");
        if (w.contains("nu")) c.costs.nu = get_num(w["nu"], "$.costs.nu");
    }
    if (j.contains("evac_penalty_factor"))
        c.evac_penalty_factor = get_num(j["evac_penalty_factor"], "$.evac_penalty_factor");
    if (j.contains("compass")) {
        const json& q = j["compass"];
        check_keys(q, "$.compass", {"iterations", "switch_interval", "max_variation",
                                    "u_bound", "stall_limit"});
        if (q.contains("iterations")) c.compass.iterations = get_int(q["iterations"], "$.compass.iterations");
        if (q.contains("switch_interval"))
            c.compass.switch_interval = get_int(q["switch_interval"], "$.compass.switch_interval");
        if (q.contains("max_variation"))
            c.compass.max_variation = get_num(q["max_variation"], "$.compass.max_variation");
        if (q.contains("u_bound")) c.compass.u_bound = get_num(q["u_bound"], "$.compass.u_bound");
        if (q.contains("stall_limit")) c.compass.stall_limit = get_int(q["stall_limit"], "$.compass.stall_limit");
    }
    if (j.contains("mpc")) {
        const json& q = j["mpc"];
        check_keys(q, "$.mpc", {"n_mpc", "inner_iterations", "u_bound", "fd_step"});
        if (q.contains("n_mpc")) c.mpc.n_mpc = get_int(q["n_mpc"], "$.mpc.n_mpc");
        if (q.contains("inner_iterations"))
            c.mpc.inner_iterations = get_int(q["inner_iterations"], "$.mpc.inner_iterations");
        if (q.contains("u_bound")) c.mpc.u_bound = get_num(q["u_bound"], "$.mpc.u_bound");
        if (q.contains("fd_step")) c.mpc.fd_step = get_num(q["fd_step"], "$.mpc.fd_step");
    }
    if (j.contains("consensus")) {
        const json& q = j["consensus"];
        check_keys(q, "$.consensus", {"phi_threshold", "dir_threshold", "window", "direction"});
        if (q.contains("phi_threshold"))
            c.consensus.phi_threshold = get_num(q["phi_threshold"], "$.consensus.phi_threshold");
        if (q.contains("dir_threshold"))
            c.consensus.dir_threshold = get_num(q["dir_threshold"], "$.consensus.dir_threshold");
        if (q.contains("window")) c.consensus.window = get_int(q["window"], "$.consensus.window");
        if (q.contains("direction")) c.consensus.direction = get_vec2(q["direction"], "$.consensus.direction");
    }
    if (j.contains("strategy")) {
        c.embedded_strategy = strategy_from_json(j["strategy"], "$.strategy");
        c.has_embedded_strategy = true;
        c.strategy_source = "embedded";
    }
    if (j.contains("strategy_source"))
        c.strategy_source = get_str(j["strategy_source"], "$.strategy_source");
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "$.output", {"trajectory", "trajectory_every", "density", "density_every",
                                   "grid_lo", "grid_hi", "grid_nx", "grid_ny",
                                   "ensemble_checkpoint"});
        if (o.contains("trajectory")) c.output.trajectory = get_bool(o["trajectory"], "$.output.trajectory");
        if (o.contains("trajectory_every"))
            c.output.trajectory_every = get_int(o["trajectory_every"], "$.output.trajectory_every");
        if (o.contains("density")) c.output.density = get_bool(o["density"], "$.output.density");
        if (o.contains("density_every"))
            c.output.density_every = get_int(o["density_every"], "$.output.density_every");
        if (o.contains("grid_lo")) c.output.grid_lo = get_vec2(o["grid_lo"], "$.output.grid_lo");
        if (o.contains("grid_hi")) c.output.grid_hi = get_vec2(o["grid_hi"], "$.output.grid_hi");
        if (o.contains("grid_nx")) c.output.grid_nx = get_int(o["grid_nx"], "$.output.grid_nx");
        if (o.contains("grid_ny")) c.output.grid_ny = get_int(o["grid_ny"], "$.output.grid_ny");
        if (o.contains("ensemble_checkpoint"))
            c.output.ensemble_checkpoint = get_bool(o["ensemble_checkpoint"], "$.output.ensemble_checkpoint");
    }
    if (j.contains("deterministic")) c.deterministic = get_bool(j["deterministic"], "$.deterministic");

    validate_config(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const Config& c) {
    if (c.mode != "micro" && c.mode != "meso")
        fail("$.mode", "must be 'micro' or 'meso'");
    const ModelParams& m = c.model;
    if (m.n_topo < 1) fail("$.model.n_topo", "must be >= 1");
    if (m.c_r_f < 0 || m.c_r_l < 0 || m.c_a < 0 || m.c_z < 0 || m.c_tau < 0 || m.c_s < 0)
        fail("$.model", "interaction strengths must be >= 0");
    if (m.s_sq < 0) fail("$.model.s_sq", "must be >= 0");
    if (m.r <= 0) fail("$.model.r", "must be > 0");
    if (m.zeta <= 0) fail("$.model.zeta", "must be > 0");
    if (m.gamma <= 0) fail("$.model.gamma", "must be > 0");
    if (m.sigma_sq < 0) fail("$.model.sigma_sq", "must be >= 0");
    if (m.dt <= 0) fail("$.model.dt", "must be > 0");
    if (m.v_max <= 0) fail("$.model.v_max", "must be > 0");

    if (c.n_followers < 0) fail("$.n_followers", "must be >= 0");
    if (c.n_leaders < 0) fail("$.n_leaders", "must be >= 0");

    const Scenario& s = c.scenario;
    if (s.horizon_steps < 1) fail("$.scenario.horizon_steps", "must be >= 1");
    if (s.spawn.hi.x <= s.spawn.lo.x || s.spawn.hi.y <= s.spawn.lo.y)
        fail("$.scenario.spawn.box", "box must have positive extent");
    if (s.exit.kind == ExitPredicate::Kind::PointCapture && s.exit.capture_radius <= 0)
        fail("$.scenario.exit.radius", "capture radius must be > 0");
    if (!s.visibility.empty() && !s.visibility.contains(s.target)) {
        // open-disk boundary counts as outside; the target must be interior
        fail("$.scenario.target", "target must lie inside the visibility region");
    }

    if (c.mode == "meso") {
        if (c.meso.n_s < 2) fail("$.meso.n_s", "must be >= 2");
        if (c.meso.epsilon <= 0) fail("$.meso.epsilon", "must be > 0");
        if (c.meso.dt <= 0) fail("$.meso.dt", "must be > 0");
        const double prob = c.meso.dt / c.meso.epsilon;
        if (prob > 1.0) {
            std::ostringstream os;
            os << "interaction probability dt/epsilon = " << prob << " exceeds 1";
            fail("$.meso.dt", os.str());
        }
        if (c.meso.subsample < 1) fail("$.meso.subsample", "must be >= 1");
        if (c.strategy_source == "mpc")
            fail("$.strategy_source", "mpc is a microscopic controller; use mode 'micro'");
    }

    if (c.costs.mu_f == 0 && c.costs.mu_l == 0 && c.costs.nu == 0)
        fail("$.costs", "at least one weight must be nonzero");
    if (c.evac_penalty_factor < 0) fail("$.evac_penalty_factor", "must be >= 0");

    if (c.compass.iterations < 0) fail("$.compass.iterations", "must be >= 0");
    if (c.compass.switch_interval < 1) fail("$.compass.switch_interval", "must be >= 1");
    if (c.compass.max_variation <= 0) fail("$.compass.max_variation", "must be > 0");
    if (c.compass.u_bound <= 0) fail("$.compass.u_bound", "must be > 0");
    if (c.compass.stall_limit < 1) fail("$.compass.stall_limit", "must be >= 1");

    if (c.mpc.n_mpc < 2) fail("$.mpc.n_mpc", "must be >= 2");
    if (c.mpc.inner_iterations < 1) fail("$.mpc.inner_iterations", "must be >= 1");
    if (c.mpc.u_bound <= 0) fail("$.mpc.u_bound", "must be > 0");
    if (c.mpc.fd_step <= 0) fail("$.mpc.fd_step", "must be > 0");

    if (c.hard_sphere.diameter < 0) fail("$.hard_sphere.diameter", "must be >= 0");

    if (c.consensus.window < 1) fail("$.consensus.window", "must be >= 1");

    if (c.has_embedded_strategy &&
        c.embedded_strategy.kind == LeaderStrategy::Kind::PiecewiseConstant) {
        const LeaderStrategy& st = c.embedded_strategy;
        if (st.n_leaders() != c.n_leaders)
            fail("$.strategy.velocities", "leader dimension does not match n_leaders");
        if (static_cast<long>(st.n_slots()) * st.switch_interval < s.horizon_steps)
            fail("$.strategy.velocities", "strategy shorter than the horizon");
    }
}

json config_to_json(const Config& c) {
    json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["mode"] = c.mode;
    j["seed"] = c.seed;
    j["n_followers"] = c.n_followers;
    j["n_leaders"] = c.n_leaders;

    json m;
    m["n_topo"] = c.model.n_topo;
    m["c_r_f"] = c.model.c_r_f;
    m["c_r_l"] = c.model.c_r_l;
    m["c_a"] = c.model.c_a;
    m["c_z"] = c.model.c_z;
    m["c_tau"] = c.model.c_tau;
    m["c_s"] = c.model.c_s;
    m["s_sq"] = c.model.s_sq;
    m["r"] = c.model.r;
    m["zeta"] = c.model.zeta;
    m["gamma"] = c.model.gamma;
    m["sigma_sq"] = c.model.sigma_sq;
    m["dt"] = c.model.dt;
    m["v_max"] = c.model.v_max;
    j["model"] = std::move(m);

    json sc;
    sc["target"] = vec2_json(c.scenario.target);
    json vis;
    switch (c.scenario.visibility.kind) {
        case VisibilityRegion::Kind::Everywhere: vis["kind"] = "everywhere"; break;
        case VisibilityRegion::Kind::Nowhere: vis["kind"] = "nowhere"; break;
        case VisibilityRegion::Kind::Disk:
            vis["kind"] = "disk";
            vis["center"] = vec2_json(c.scenario.visibility.center);
            vis["radius"] = c.scenario.visibility.radius;
            break;
        case VisibilityRegion::Kind::HalfPlane:
            vis["kind"] = "half_plane";
            vis["point"] = vec2_json(c.scenario.visibility.center);
            vis["normal"] = vec2_json(c.scenario.visibility.normal);
            break;
    }
    sc["visibility"] = std::move(vis);
    json walls = json::array();
    for (const auto& w : c.scenario.obstacles) {
        json jw;
        jw["a"] = vec2_json(w.a);
        jw["b"] = vec2_json(w.b);
        jw["thickness"] = w.thickness;
        walls.push_back(std::move(jw));
    }
    sc["obstacles"] = std::move(walls);
    json ex;
    switch (c.scenario.exit.kind) {
        case ExitPredicate::Kind::None: ex["kind"] = "none"; break;
        case ExitPredicate::Kind::PointCapture:
            ex["kind"] = "point_capture";
            ex["point"] = vec2_json(c.scenario.exit.point);
            ex["radius"] = c.scenario.exit.capture_radius;
            break;
        case ExitPredicate::Kind::SegmentCrossing:
            ex["kind"] = "segment";
            ex["a"] = vec2_json(c.scenario.exit.a);
            ex["b"] = vec2_json(c.scenario.exit.b);
            break;
    }
    sc["exit"] = std::move(ex);
    sc["spawn"] = {{"box", json::array({c.scenario.spawn.lo.x, c.scenario.spawn.lo.y,
                                        c.scenario.spawn.hi.x, c.scenario.spawn.hi.y})},
                   {"velocity", c.scenario.spawn.velocity == SpawnSpec::VelocityRule::Zero
                                    ? "zero"
                                    : "random_direction"}};
    sc["horizon_steps"] = c.scenario.horizon_steps;
    j["scenario"] = std::move(sc);

    json li;
    switch (c.leader_init.kind) {
        case LeaderInit::Kind::Column:
            li["kind"] = "column";
            li["x"] = c.leader_init.x;
            li["y_lo"] = c.leader_init.y_lo;
            li["y_hi"] = c.leader_init.y_hi;
            break;
        case LeaderInit::Kind::UniformInSpawn: li["kind"] = "uniform_in_spawn"; break;
        case LeaderInit::Kind::StratifiedInSpawn: li["kind"] = "stratified_in_spawn"; break;
        case LeaderInit::Kind::NearExit:
            li["kind"] = "near_exit";
            li["center"] = vec2_json(c.leader_init.center);
            li["spacing"] = c.leader_init.spacing;
            break;
        case LeaderInit::Kind::Fixed: {
            li["kind"] = "fixed";
            json ps = json::array();
            for (const auto& pv : c.leader_init.positions) ps.push_back(vec2_json(pv));
            li["positions"] = std::move(ps);
            break;
        }
    }
    j["leader_init"] = std::move(li);

    j["meso"] = {{"n_s", c.meso.n_s},         {"epsilon", c.meso.epsilon},
                 {"dt", c.meso.dt},           {"subsample", c.meso.subsample},
                 {"grid_nx", c.meso.grid_nx}, {"grid_ny", c.meso.grid_ny},
                 {"use_grid", c.meso.use_grid}};
    j["hard_sphere"] = {{"enabled", c.hard_sphere.enabled}, {"diameter", c.hard_sphere.diameter}};
    j["costs"] = {{"mu_f", c.costs.mu_f}, {"mu_l", c.costs.mu_l}, {"nu", c.costs.nu}};
    j["evac_penalty_factor"] = c.evac_penalty_factor;
    j["compass"] = {{"iterations", c.compass.iterations},
                    {"switch_interval", c.compass.switch_interval},
                    {"max_variation", c.compass.max_variation},
                    {"u_bound", c.compass.u_bound},
                    {"stall_limit", c.compass.stall_limit}};
    j["mpc"] = {{"n_mpc", c.mpc.n_mpc},
                {"inner_iterations", c.mpc.inner_iterations},
                {"u_bound", c.mpc.u_bound},
                {"fd_step", c.mpc.fd_step}};
    j["consensus"] = {{"phi_threshold", c.consensus.phi_threshold},
                      {"dir_threshold", c.consensus.dir_threshold},
                      {"window", c.consensus.window},
                      {"direction", vec2_json(c.consensus.direction)}};
    j["strategy_source"] = c.strategy_source;
    if (c.has_embedded_strategy) j["strategy"] = strategy_to_json(c.embedded_strategy);
    j["output"] = {{"trajectory", c.output.trajectory},
                   {"trajectory_every", c.output.trajectory_every},
                   {"density", c.output.density},
                   {"density_every", c.output.density_every},
                   {"grid_lo", vec2_json(c.output.grid_lo)},
                   {"grid_hi", vec2_json(c.output.grid_hi)},
                   {"grid_nx", c.output.grid_nx},
                   {"grid_ny", c.output.grid_ny},
                   {"ensemble_checkpoint", c.output.ensemble_checkpoint}};
    j["deterministic"] = c.deterministic;
    return j;
}

std::vector<std::string> preset_names() {
    return {"setting0", "setting1", "setting1-meso", "setting2", "setting3"};
}

Config preset_config(const std::string& name) {
    Config c;
    c.preset = name;
    if (name == "setting0") {
        // Open space, nothing visible: the herding benchmark.
        c.mode = "micro";
        c.n_followers = 150;
        c.n_leaders = 5;
        c.model = ModelParams{};
        c.model.n_topo = 10;
        c.model.c_r_f = 2.0;
        c.model.c_r_l = 1.5;
        c.model.c_a = 2.0;
        c.model.c_z = 0.25;
        c.model.c_tau = 0.0;  // no visible target anywhere
        c.model.c_s = 1.0;
        c.model.s_sq = 0.5;
        c.model.r = 0.4;
        c.model.zeta = 0.4;
        c.model.gamma = 1.0;
        c.model.sigma_sq = 2.25;
        c.model.dt = 0.1;
        c.scenario.target = {100.0, 4.6};  // unused: nothing is visible
        c.scenario.visibility.kind = VisibilityRegion::Kind::Nowhere;
        c.scenario.exit.kind = ExitPredicate::Kind::None;
        c.scenario.spawn.lo = {0.0, 0.0};
        c.scenario.spawn.hi = {9.2, 9.2};
        c.scenario.horizon_steps = 240;
        // hidden sweep line: a leader column at the left edge of the crowd
        c.leader_init.kind = LeaderInit::Kind::Column;
        c.leader_init.x = 0.5;
        c.leader_init.y_lo = 1.0;
        c.leader_init.y_hi = 8.2;
        LeaderStrategy st;
        st.kind = LeaderStrategy::Kind::PiecewiseConstant;
        st.switch_interval = 1000000;  // single slot, any horizon
        st.u_bound = 1.0;
        st.velocities = {std::vector<Vec2>(static_cast<size_t>(c.n_leaders), Vec2{1.0, 0.0})};
        c.embedded_strategy = st;
        c.has_embedded_strategy = true;
        c.strategy_source = "embedded";
        c.consensus.direction = {1.0, 0.0};
        c.consensus.dir_threshold = 0.95;
        c.consensus.window = 100;
        c.output.trajectory = false;
    } else if (name == "setting1" || name == "setting1-meso") {
        c.mode = (name == "setting1") ? "micro" : "meso";
        c.n_followers = 150;
        c.n_leaders = 3;
        c.model = ModelParams{};
        c.model.n_topo = 10;
        c.model.c_r_f = 2.0;
        c.model.c_r_l = 1.5;
        c.model.c_a = 3.0;
        c.model.c_z = 0.2;
        c.model.c_tau = 1.0;
        c.model.c_s = 1.0;
        c.model.s_sq = 0.5;
        c.model.r = 0.4;
        c.model.zeta = 0.4;
        c.model.gamma = 1.0;
        c.model.sigma_sq = 1.0;
        c.model.dt = 0.1;
        c.scenario.target = {30.0, 10.0};
        c.scenario.visibility.kind = VisibilityRegion::Kind::Disk;
        c.scenario.visibility.center = {30.0, 10.0};
        c.scenario.visibility.radius = 4.0;
        c.scenario.exit.kind = ExitPredicate::Kind::PointCapture;
        c.scenario.exit.point = {30.0, 10.0};
        // capture ring: wider than the lone-walker pursuit orbit (~0.12),
        // narrow enough that the crowd still queues at the exit
        c.scenario.exit.capture_radius = 0.15;
        c.scenario.spawn.lo = {17.0, 6.5};
        c.scenario.spawn.hi = {29.0, 13.5};
        c.leader_init.kind = LeaderInit::Kind::Column;
        c.leader_init.x = 16.5;
        c.leader_init.y_lo = 8.5;
        c.leader_init.y_hi = 11.5;
        c.costs = CostWeights{1.0, 1e-5, 1e-5};
        if (c.mode == "micro") {
            c.scenario.horizon_steps = 2000;
            c.compass.iterations = 50;
            c.compass.switch_interval = 20;
        } else {
            c.scenario.horizon_steps = 6000;  // dt = 0.01
            c.compass.iterations = 30;
            c.compass.switch_interval = 500;
            c.output.trajectory = false;
            c.output.density = false;
        }
        c.compass.max_variation = 1.0;
        c.compass.u_bound = 1.0;
    } else if (name == "setting2") {
        // Room with three walls and a hidden exit; geometry reconstructed
        // approximately from the published layout.
        c.mode = "micro";
        c.n_followers = 100;
        c.n_leaders = 2;
        c.model = ModelParams{};
        c.model.n_topo = 10;
        c.model.c_r_f = 2.0;
        c.model.c_r_l = 1.5;
        c.model.c_a = 3.0;
        c.model.c_z = 0.2;
        c.model.c_tau = 1.0;
        c.model.c_s = 1.0;
        c.model.s_sq = 0.5;
        c.model.r = 0.4;
        c.model.zeta = 0.4;
        c.model.gamma = 1.0;
        c.model.sigma_sq = 1.0;
        c.model.dt = 0.1;
        c.scenario.obstacles = {
            {{0.0, 0.0}, {0.0, 6.0}, 0.1},     // room, left
            {{0.0, 6.0}, {8.0, 6.0}, 0.1},     // room, top
            {{0.0, 0.0}, {8.0, 0.0}, 0.1},     // room, bottom (open right side)
            {{14.0, -3.0}, {14.0, 12.0}, 0.1}, // domain boundary on the right
        };
        c.scenario.target = {13.5, 13.0};
        c.scenario.visibility.kind = VisibilityRegion::Kind::Disk;
        c.scenario.visibility.center = {13.5, 13.0};
        c.scenario.visibility.radius = 3.0;
        c.scenario.exit.kind = ExitPredicate::Kind::PointCapture;
        c.scenario.exit.point = {13.5, 13.0};
        c.scenario.exit.capture_radius = 0.25;
        c.scenario.spawn.lo = {1.0, 1.0};
        c.scenario.spawn.hi = {7.0, 5.0};
        c.scenario.horizon_steps = 2000;
        c.leader_init.kind = LeaderInit::Kind::Column;
        c.leader_init.x = 1.5;
        c.leader_init.y_lo = 2.5;
        c.leader_init.y_hi = 3.5;
        c.costs = CostWeights{1.0, 1e-5, 1e-5};
        c.compass.iterations = 50;
        c.compass.switch_interval = 50;
        c.compass.max_variation = 1.0;
        c.compass.u_bound = 1.0;
    } else if (name == "setting3") {
        // Door bottleneck with finite-size bodies and smart obstacles.
        c.mode = "micro";
        c.n_followers = 50;
        c.n_leaders = 3;
        c.model = ModelParams{};
        c.model.n_topo = 10;
        c.model.c_r_f = 1.0;
        c.model.c_r_l = 0.0;
        c.model.c_a = 0.0;   // inactive: the exit is visible everywhere
        c.model.c_z = 0.0;   // likewise
        c.model.c_tau = 1.0;
        c.model.c_s = 1.0;
        c.model.s_sq = 0.5;
        c.model.r = 0.5;
        c.model.zeta = 0.5;
        c.model.gamma = 1.0;
        c.model.sigma_sq = 0.0;
        c.model.dt = 0.1;
        const double door_lo = 3.0 - 0.225, door_hi = 3.0 + 0.225;  // width 0.45
        c.scenario.obstacles = {
            {{0.0, 0.0}, {0.0, 6.0}, 0.1},        // left
            {{0.0, 6.0}, {8.0, 6.0}, 0.1},        // top
            {{0.0, 0.0}, {8.0, 0.0}, 0.1},        // bottom
            {{8.0, 0.0}, {8.0, door_lo}, 0.1},    // right of door, lower
            {{8.0, door_hi}, {8.0, 6.0}, 0.1},    // right of door, upper
        };
        c.scenario.target = {8.0, 3.0};
        c.scenario.visibility.kind = VisibilityRegion::Kind::Everywhere;
        c.scenario.exit.kind = ExitPredicate::Kind::SegmentCrossing;
        c.scenario.exit.a = {8.0, door_lo};
        c.scenario.exit.b = {8.0, door_hi};
        c.scenario.spawn.lo = {0.7, 0.7};
        c.scenario.spawn.hi = {5.0, 5.3};
        c.scenario.horizon_steps = 2000;
        c.hard_sphere.enabled = true;
        c.hard_sphere.diameter = 0.25;
        c.leader_init.kind = LeaderInit::Kind::NearExit;
        c.leader_init.center = {7.2, 3.0};
        c.leader_init.spacing = 0.45;
        LeaderStrategy st;
        st.kind = LeaderStrategy::Kind::RandomNearExit;
        st.speed_bound = 1.3;
        st.tether_center = {7.2, 3.0};
        st.tether_radius = 0.7;
        c.embedded_strategy = st;
        c.has_embedded_strategy = true;
        c.strategy_source = "embedded";
        c.output.trajectory = false;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    validate_config(c);
    return c;
}

std::vector<Vec2> initial_leader_positions(const Config& c) {
    std::vector<Vec2> out;
    const int nl = c.n_leaders;
    if (nl == 0) return out;
    switch (c.leader_init.kind) {
        case LeaderInit::Kind::Column: {
            for (int k = 0; k < nl; ++k) {
                double y = nl == 1 ? 0.5 * (c.leader_init.y_lo + c.leader_init.y_hi)
                                   : c.leader_init.y_lo +
                                         (c.leader_init.y_hi - c.leader_init.y_lo) * k / (nl - 1);
                out.push_back({c.leader_init.x, y});
            }
            break;
        }
        case LeaderInit::Kind::UniformInSpawn:
        case LeaderInit::Kind::StratifiedInSpawn: {
            // placed per seed in make_crowd; centroid placeholder here
            for (int k = 0; k < nl; ++k)
                out.push_back({0.5 * (c.scenario.spawn.lo.x + c.scenario.spawn.hi.x),
                               0.5 * (c.scenario.spawn.lo.y + c.scenario.spawn.hi.y)});
            break;
        }
        case LeaderInit::Kind::NearExit: {
            for (int k = 0; k < nl; ++k) {
                double y = c.leader_init.center.y +
                           c.leader_init.spacing * (k - 0.5 * (nl - 1));
                out.push_back({c.leader_init.center.x, y});
            }
            break;
        }
        case LeaderInit::Kind::Fixed: {
            if (static_cast<int>(c.leader_init.positions.size()) < nl)
                throw ConfigError("leader_init.positions: fewer entries than n_leaders");
            out.assign(c.leader_init.positions.begin(), c.leader_init.positions.begin() + nl);
            break;
        }
    }
    return out;
}

CrowdState make_crowd(const Config& c, const RandomSource& rng) {
    CrowdState st;
    st.followers.resize(c.n_followers);
    const SpawnSpec& box = c.scenario.spawn;
    const double min_sep = c.hard_sphere.enabled ? 1.1 * c.hard_sphere.diameter : 0.0;
    for (int i = 0; i < c.n_followers; ++i) {
        RandomSource r = rng.at(rng_tag::spawn, static_cast<std::uint64_t>(i));
        Vec2 p;
        for (int attempt = 0; attempt < 200; ++attempt) {
            p = {r.uniform(box.lo.x, box.hi.x), r.uniform(box.lo.y, box.hi.y)};
            if (min_sep <= 0.0) break;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k)
                if (dist_sq(p, st.followers[k].position) < min_sep * min_sep) ok = false;
            if (ok) break;
        }
        st.followers[i].position = p;
        st.followers[i].velocity = {0.0, 0.0};
        if (box.velocity == SpawnSpec::VelocityRule::RandomDirection) {
            const double speed = std::sqrt(c.model.s_sq);
            const double ang = r.uniform(0.0, 6.283185307179586);
            st.followers[i].velocity = {speed * std::cos(ang), speed * std::sin(ang)};
        }
    }
    std::vector<Vec2> lp = initial_leader_positions(c);
    st.leaders.resize(c.n_leaders);
    for (int k = 0; k < c.n_leaders; ++k) {
        Vec2 p = lp[k];
        if (c.leader_init.kind == LeaderInit::Kind::UniformInSpawn) {
            RandomSource r = rng.at(rng_tag::spawn, 0x10000u + static_cast<std::uint64_t>(k));
            p = {r.uniform(box.lo.x, box.hi.x), r.uniform(box.lo.y, box.hi.y)};
        } else if (c.leader_init.kind == LeaderInit::Kind::StratifiedInSpawn) {
            // one leader per horizontal band: hidden in the crowd but with
            // guaranteed coverage across the marching direction
            RandomSource r = rng.at(rng_tag::spawn, 0x10000u + static_cast<std::uint64_t>(k));
            const double band = (box.hi.y - box.lo.y) / c.n_leaders;
            p = {r.uniform(box.lo.x, box.hi.x),
                 r.uniform(box.lo.y + k * band, box.lo.y + (k + 1) * band)};
        }
        st.leaders[k].position = p;
        st.leaders[k].velocity = {0.0, 0.0};
    }
    return st;
}

}  // namespace crowd
