// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  An integer argument list restricts the run to those criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crowd/config.hpp"
#include "crowd/io.hpp"
#include "crowd/meso.hpp"
#include "crowd/metrics.hpp"
#include "crowd/micro.hpp"
#include "crowd/mpc.hpp"
#include "crowd/runner.hpp"

using namespace crowd;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

double steps_or_penalty(const SimResult& r, const Config& c) {
    return r.evac_time_value / c.sim_dt();  // step-equivalent cost, finite ordering
}

// ---------------------------------------------------------------- criterion 1
bool kernel_exactness(std::string& detail) {
    bool ok = true;
    const double tol = 1e-12;

    Vec2 rep = repulsion_kernel({0, 0}, {0.2, 0}, 1.0, 0.4);
    ok &= close_rel(rep.x, std::exp(-0.2), tol) && rep.y == 0.0;

    ModelParams p;
    p.c_r_f = 2.0; p.c_r_l = 1.5; p.c_a = 3.0; p.c_z = 0.2; p.c_tau = 1.0;
    p.c_s = 1.0; p.s_sq = 0.5; p.r = 0.4; p.zeta = 0.4; p.gamma = 1.0;

    Scenario in;
    in.target = {30, 10};
    in.visibility.kind = VisibilityRegion::Kind::Everywhere;
    Vec2 a2 = self_propulsion({29, 10}, {1, 0}, {0, 0}, p, in);
    ok &= close_rel(a2.x, -0.5, tol) && a2.y == 0.0;
    Vec2 a3 = self_propulsion({29, 10}, {std::sqrt(0.5), 0}, {0, 0}, p, in);
    ok &= close_rel(a3.x, 1.0 - std::sqrt(0.5), tol);

    Vec2 h2 = follower_interaction({0, 0}, {0, 0}, {0.2, 0}, {0, 0}, 0.0, 1.0, p, in);
    ok &= close_rel(h2.x, -2.0 * std::exp(-0.2), tol);
    Scenario out;
    out.visibility.kind = VisibilityRegion::Kind::Nowhere;
    Vec2 h3 = follower_interaction({0, 0}, {0, 0}, {1, 0}, {1, 0}, 4.0, 2.0, p, out);
    ok &= close_rel(h3.x, 1.5, tol);

    ModelParams pl = p;
    pl.zeta = 1.0;
    CrowdState st;
    st.leaders.push_back({{0, 0}, {0, 0}});
    st.followers.push_back({{0.2, 0}, {0, 0}, false});
    Vec2 w = leader_velocity(0, st, {0, 0}, pl);
    ok &= close_rel(w.x, -1.5 * std::exp(-0.2), tol);

    detail = "hand-derived kernel values at relative tolerance 1e-12";
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool setting0_herding(std::string& detail) {
    Config base = preset_config("setting0");
    base.output.trajectory = false;
    const int seeds = 100;
    std::map<int, double> rate;
    for (int nl : {1, 2, 3, 4, 5}) {
        Config c = base;
        c.n_leaders = nl;
        c.embedded_strategy.velocities.assign(
            1, std::vector<Vec2>(static_cast<size_t>(nl), Vec2{1.0, 0.0}));
        LeaderStrategy st = c.embedded_strategy;
        int hits = 0;
        for (int s = 0; s < seeds; ++s) {
            SimResult r = run_micro(c, st, 1000 + s);
            hits += r.consensus ? 1 : 0;
        }
        rate[nl] = static_cast<double>(hits) / seeds;
    }
    std::ostringstream os;
    os << "consensus rates:";
    for (auto& [nl, f] : rate) os << " " << nl << "->" << f;
    detail = os.str();

    bool ok = rate[5] >= 0.90 && rate[1] <= 0.10;
    for (int nl = 2; nl <= 5; ++nl) ok &= rate[nl] >= rate[nl - 1] - 0.10;
    return ok;
}

// ---------------------------------------------------------------- criterion 3
bool setting1_micro_ordering(std::string& detail) {
    Config c = preset_config("setting1");
    c.output.trajectory = false;
    c.seed = 1;
    c.compass.iterations = 50;

    CompassResult comp;
    Config ccfg = c;
    ccfg.strategy_source = "compass";
    LeaderStrategy cs = resolve_strategy(ccfg, &comp);
    for (size_t i = 1; i < comp.history.size(); ++i)
        if (comp.history[i].cost > comp.history[i - 1].cost) {
            detail = "compass history increased";
            return false;
        }

    LeaderStrategy gtt;
    gtt.kind = LeaderStrategy::Kind::GoToTarget;

    std::vector<double> cs_steps, gtt_steps, nl_steps;
    int nl_horizon_hits = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = 101 + s;
        cs_steps.push_back(steps_or_penalty(run_micro(c, cs, seed), c));
        gtt_steps.push_back(steps_or_penalty(run_micro(c, gtt, seed), c));
        Config c0 = c;
        c0.n_leaders = 0;
        SimResult rnl = run_micro(c0, gtt, seed);
        nl_steps.push_back(steps_or_penalty(rnl, c0));
        nl_horizon_hits += rnl.evac_step < 0 ? 1 : 0;
    }
    const double med_cs = median(cs_steps);
    const double med_gtt = median(gtt_steps);
    const double med_nl = median(nl_steps);
    std::ostringstream os;
    os << "median steps: compass " << med_cs << ", go-to-target " << med_gtt
       << ", no-leaders " << med_nl << " (horizon hits " << nl_horizon_hits << "/20)";
    detail = os.str();

    bool ok = med_cs < med_gtt && med_gtt < med_nl;
    ok &= med_cs >= 459.0 * 0.65 && med_cs <= 459.0 * 1.35;
    ok &= nl_horizon_hits >= 10;
    return ok;
}

// ---------------------------------------------------------------- criterion 4
bool mpc_consistency(std::string& detail) {
    // part 1: the two-step controller equals a dedicated instantaneous
    // minimizer on random states
    ModelParams p;
    p.c_r_f = 0.5; p.c_r_l = 0.3; p.c_a = 1.0; p.c_z = 0.0; p.c_tau = 0.0;
    p.c_s = 0.5; p.s_sq = 0.5; p.r = 0.4; p.zeta = 0.4; p.gamma = 1.0;
    p.sigma_sq = 0.0; p.dt = 0.1;
    Scenario sc;
    sc.target = {10, 0};
    sc.visibility.kind = VisibilityRegion::Kind::Nowhere;
    sc.exit.kind = ExitPredicate::Kind::None;

    RandomSource rng(77);
    double max_diff = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        CrowdState st;
        // near-target states keep the control basin numerically resolvable
        for (int i = 0; i < 8; ++i)
            st.followers.push_back({{sc.target.x + rng.uniform(-1.5, 1.5),
                                     sc.target.y + rng.uniform(-1.5, 1.5)},
                                    {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)},
                                    false});
        for (int k = 0; k < 2; ++k)
            st.leaders.push_back({{sc.target.x + rng.uniform(-1.5, 1.5),
                                   sc.target.y + rng.uniform(-1.5, 1.5)},
                                  {0, 0}});
        CostWeights w{1.0, 0.5, 0.1};
        MpcConfig cfg{2, 400, 1.0, 1e-3};
        auto a = mpc_step(st, cfg, w, p, sc);
        auto b = instantaneous_control(st, w, p, sc, 1.0);
        for (size_t k = 0; k < a.size(); ++k)
            max_diff = std::max({max_diff, std::abs(a[k].x - b[k].x), std::abs(a[k].y - b[k].y)});
    }
    if (max_diff > 1e-4) {
        detail = "instantaneous mismatch " + fmt9(max_diff);
        return false;
    }

    // part 2: a longer horizon does not evacuate slower
    Config c = preset_config("setting1");
    c.output.trajectory = false;
    c.n_followers = 50;
    c.n_leaders = 3;
    c.mpc.inner_iterations = 3;  // warm-started receding horizon
    LeaderStrategy mpc_policy;
    mpc_policy.kind = LeaderStrategy::Kind::MpcPolicy;

    std::vector<double> two_steps, six_steps;
    for (int s = 0; s < 20; ++s) {
        const std::uint64_t seed = 301 + s;
        Config c2 = c;
        c2.mpc.n_mpc = 2;
        two_steps.push_back(steps_or_penalty(run_micro(c2, mpc_policy, seed), c2));
        Config c6 = c;
        c6.mpc.n_mpc = 6;
        six_steps.push_back(steps_or_penalty(run_micro(c6, mpc_policy, seed), c6));
    }
    const double med2 = median(two_steps), med6 = median(six_steps);
    std::ostringstream os;
    os << "max |u_mpc2 - u_inst| " << fmt9(max_diff) << "; median steps mpc6 " << med6
       << " <= mpc2 " << med2;
    detail = os.str();
    return med6 <= med2;
}

// ---------------------------------------------------------------- criterion 5
bool meso_mass_conservation(std::string& detail) {
    Config c = preset_config("setting1-meso");
    c.scenario.exit.kind = ExitPredicate::Kind::None;  // exit disabled
    ParticleEnsemble ens = make_ensemble(c.meso.n_s, c.n_followers, c.scenario.spawn,
                                         RandomSource(11));
    LeaderSwarm swarm;
    auto lp = initial_leader_positions(c);
    for (auto& q : lp) swarm.leaders.push_back({q, {0, 0}});
    LeaderStrategy gtt;
    gtt.kind = LeaderStrategy::Kind::GoToTarget;
    CrowdState mirror;
    KineticOptions kopt;
    kopt.subsample = c.meso.subsample;

    const double m0 = ens.total_mass;
    bool exact = true;
    for (int step = 0; step < 1000; ++step) {
        mirror.leaders = swarm.leaders;
        auto u = strategy_controls(gtt, step, mirror, c.scenario, RandomSource(11));
        KineticScaling s = KineticScaling::make(c.meso.epsilon, ens.total_mass,
                                                swarm.mass(), c.model.sigma_sq);
        kinetic_step(ens, swarm, u, c.meso.dt, step, s, c.model, c.scenario,
                     RandomSource(11), kopt);
        exact &= ens.total_mass == m0;
    }
    detail = "mass drift over 1000 steps: " + fmt9(ens.total_mass - m0);
    return exact;
}

// ---------------------------------------------------------------- criterion 6
bool meso_diffusion_floor(std::string& detail) {
    ModelParams p;
    p.c_r_f = p.c_r_l = p.c_a = p.c_tau = p.c_s = 0.0;
    p.c_z = 1.0;
    p.sigma_sq = 0.09;
    p.r = 0.4; p.zeta = 0.4; p.gamma = 1.0; p.s_sq = 0.5;
    Scenario out;
    out.visibility.kind = VisibilityRegion::Kind::Nowhere;
    out.exit.kind = ExitPredicate::Kind::None;
    SpawnSpec box{{0, 0}, {10, 10}};

    double growth = 0.0;
    const int reps = 10;
    for (int rep = 0; rep < reps; ++rep) {
        ParticleEnsemble ens = make_ensemble(10000, 150.0, box, RandomSource(500 + rep));
        LeaderSwarm swarm;
        KineticScaling s = KineticScaling::make(0.02, ens.total_mass, 0.0, p.sigma_sq);
        kinetic_step(ens, swarm, {}, 0.01, 0, s, p, out, RandomSource(900 + rep), {});
        double var = 0.0;
        for (const auto& q : ens.samples)
            var += q.velocity.x * q.velocity.x + q.velocity.y * q.velocity.y;
        growth += var / (2.0 * ens.n_s);
    }
    growth /= reps;
    const double expected = p.sigma_sq * 0.01;
    detail = "variance growth per axis " + fmt9(growth) + " vs sigma^2 dt " + fmt9(expected);
    return std::abs(growth - expected) <= 0.10 * expected;
}

// ---------------------------------------------------------------- criterion 7
bool micro_meso_consistency(std::string& detail) {
    ModelParams p;
    p.n_topo = 3;
    p.c_r_f = 2.0; p.c_r_l = 1.5; p.c_a = 3.0; p.c_z = 0.2; p.c_tau = 1.0;
    p.c_s = 1.0; p.s_sq = 0.5; p.r = 0.4; p.zeta = 0.4; p.gamma = 1.0;
    p.sigma_sq = 0.0; p.dt = 0.1;
    Scenario sc;
    sc.target = {2, 0};
    sc.visibility.kind = VisibilityRegion::Kind::Disk;
    sc.visibility.center = {2, 0};
    sc.visibility.radius = 1.5;
    sc.exit.kind = ExitPredicate::Kind::None;

    std::vector<Vec2> pos = {{0, 0}, {0.3, 0.1}, {1.2, -0.2}, {0.9, 0.4}, {0.6, -0.3}};
    std::vector<Vec2> vel = {{0.1, 0}, {-0.2, 0.3}, {0.4, 0.1}, {0, -0.3}, {0.2, 0.2}};

    CrowdState micro;
    for (size_t i = 0; i < pos.size(); ++i) micro.followers.push_back({pos[i], vel[i], false});
    micro.leaders.push_back({{-0.3, 0}, {0, 0}});
    std::vector<Vec2> controls = {{0.3, -0.2}};

    ParticleEnsemble ens;
    ens.n_s = static_cast<int>(pos.size());
    ens.particle_weight = 1.0;
    ens.total_mass = static_cast<double>(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) ens.samples.push_back({pos[i], vel[i], true});
    LeaderSwarm swarm;
    swarm.leaders = micro.leaders;

    KineticOptions opt;
    opt.deterministic = true;
    opt.use_grid = false;

    double worst = 0.0;
    for (int step = 0; step < 5; ++step) {
        micro = micro_step(micro, controls, p, sc, RandomSource(1));
        KineticScaling s = KineticScaling::make(p.dt, ens.total_mass, swarm.mass(), 0.0);
        kinetic_step(ens, swarm, controls, p.dt, step, s, p, sc, RandomSource(1), opt);
        for (size_t i = 0; i < pos.size(); ++i) {
            const Vec2 dx = ens.samples[i].position - micro.followers[i].position;
            const Vec2 dv = ens.samples[i].velocity - micro.followers[i].velocity;
            const double scale = std::max({1.0, micro.followers[i].position.norm(),
                                           micro.followers[i].velocity.norm()});
            worst = std::max(worst, std::max(dx.norm(), dv.norm()) / scale);
        }
    }
    detail = "worst relative deviation " + fmt9(worst);
    return worst <= 1e-10;
}

// ---------------------------------------------------------------- criterion 8
bool setting1_meso_ordering(std::string& detail) {
    Config c = preset_config("setting1-meso");
    c.output.trajectory = false;
    c.output.ensemble_checkpoint = false;
    c.seed = 1;

    Config ccfg = c;
    ccfg.strategy_source = "compass";
    CompassResult comp;
    LeaderStrategy cs = resolve_strategy(ccfg, &comp);
    for (size_t i = 1; i < comp.history.size(); ++i)
        if (comp.history[i].cost > comp.history[i - 1].cost) {
            detail = "compass history increased";
            return false;
        }

    LeaderStrategy gtt;
    gtt.kind = LeaderStrategy::Kind::GoToTarget;

    std::vector<double> f_nl, f_gtt, f_cs;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = 201 + s;
        Config c0 = c;
        c0.n_leaders = 0;
        RunOptions opt;
        opt.record_series = false;
        f_nl.push_back(run_meso(c0, gtt, seed, opt).evac_fraction);
        f_gtt.push_back(run_meso(c, gtt, seed, opt).evac_fraction);
        f_cs.push_back(run_meso(c, cs, seed, opt).evac_fraction);
    }
    const double m_nl = mean_ci(f_nl).mean;
    const double m_gtt = mean_ci(f_gtt).mean;
    const double m_cs = mean_ci(f_cs).mean;
    std::ostringstream os;
    os << "mean evacuated fraction: none " << fmt9(m_nl) << ", go-to-target " << fmt9(m_gtt)
       << ", compass " << fmt9(m_cs);
    detail = os.str();
    return m_nl < m_gtt && m_gtt < m_cs && m_nl <= 0.55 && m_cs >= 0.75;
}

// ---------------------------------------------------------------- criterion 9
bool setting3_smart_obstacles(std::string& detail) {
    Config base = preset_config("setting3");
    base.output.trajectory = false;
    const int replicates = 200;
    std::map<int, double> fail;
    for (int nl = 0; nl <= 6; ++nl) {
        Config c = base;
        c.n_leaders = nl;
        LeaderStrategy st = c.embedded_strategy;
        int failures = 0;
        for (int i = 0; i < replicates; ++i) {
            RunOptions opt;
            opt.record_series = false;
            opt.stop_at_evacuated = c.n_followers - 10;
            SimResult r = run_micro(c, st, 7000 + i, opt);
            failures += r.threshold_step < 0 ? 1 : 0;
        }
        fail[nl] = static_cast<double>(failures) / replicates;
    }
    int argmin = 0;
    for (auto& [nl, f] : fail)
        if (f < fail[argmin]) argmin = nl;

    // one-sided two-proportion test, 95%
    const double p0 = fail[0], p3 = fail[3];
    const double pool = 0.5 * (p0 + p3);
    const double se = std::sqrt(std::max(1e-12, pool * (1.0 - pool) * 2.0 / replicates));
    const double z = (p0 - p3) / se;

    std::ostringstream os;
    os << "failure rates:";
    for (auto& [nl, f] : fail) os << " " << nl << "->" << f;
    os << "; z=" << fmt9(z) << ", argmin=" << argmin;
    detail = os.str();
    return z > 1.645 && argmin >= 2 && argmin <= 4;
}

// --------------------------------------------------------------- criterion 10
bool optimizer_invariants(std::string& detail) {
    // compass monotonicity on a simulation objective (short horizon)
    Config c = preset_config("setting1");
    c.output.trajectory = false;
    c.n_followers = 40;
    c.scenario.horizon_steps = 400;
    c.compass.iterations = 25;
    c.seed = 5;
    Config ccfg = c;
    ccfg.strategy_source = "compass";
    CompassResult comp;
    LeaderStrategy cs = resolve_strategy(ccfg, &comp);
    for (size_t i = 1; i < comp.history.size(); ++i)
        if (comp.history[i].cost > comp.history[i - 1].cost) {
            detail = "compass history increased";
            return false;
        }
    for (const auto& slot : cs.velocities)
        for (const auto& u : slot)
            if (std::abs(u.x) > c.compass.u_bound + 1e-12 ||
                std::abs(u.y) > c.compass.u_bound + 1e-12) {
                detail = "compass control left the box";
                return false;
            }

    // emitted controls stay inside the box along closed-loop runs
    LeaderStrategy mpc_policy;
    mpc_policy.kind = LeaderStrategy::Kind::MpcPolicy;
    Config cm = c;
    cm.scenario.horizon_steps = 60;
    cm.mpc.n_mpc = 3;
    cm.mpc.inner_iterations = 3;
    SimResult rm = run_micro(cm, mpc_policy, 17);
    if (rm.max_control_abs > cm.mpc.u_bound + 1e-12) {
        detail = "mpc control left the box: " + fmt9(rm.max_control_abs);
        return false;
    }
    SimResult rc = run_micro(c, cs, 18);
    if (rc.max_control_abs > c.compass.u_bound + 1e-12) {
        detail = "compass control left the box in simulation";
        return false;
    }

    // finite-difference gradient agreement (1e-3 vs Richardson at 1e-2)
    ModelParams p;
    p.c_r_f = 0.4; p.c_a = 0.7; p.c_z = 0.0; p.c_tau = 0.3; p.c_s = 0.5;
    p.s_sq = 0.5; p.r = 0.4; p.zeta = 0.4; p.gamma = 1.0; p.sigma_sq = 0.0; p.dt = 0.1;
    Scenario sc;
    sc.target = {5, 5};
    sc.visibility.kind = VisibilityRegion::Kind::Everywhere;
    sc.exit.kind = ExitPredicate::Kind::None;
    RandomSource rng(31);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        CrowdState st;
        for (int i = 0; i < 6; ++i)
            st.followers.push_back({{rng.uniform(0, 3), rng.uniform(0, 3)},
                                    {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)},
                                    false});
        st.leaders.push_back({{rng.uniform(0, 3), rng.uniform(0, 3)}, {0, 0}});
        CostWeights w{1.0, 1e-2, 1e-3};
        auto objective = mpc_objective(st, 3, w, p, sc);
        std::vector<double> u(6);
        for (auto& x : u) x = rng.uniform(-0.8, 0.8);
        auto g1 = fd_gradient(objective, u, 1e-3);
        auto ga = fd_gradient(objective, u, 1e-2);
        auto gb = fd_gradient(objective, u, 2e-2);
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k < u.size(); ++k) {
            double rich = (4.0 * ga[k] - gb[k]) / 3.0;
            num += (g1[k] - rich) * (g1[k] - rich);
            den += g1[k] * g1[k];
        }
        worst = std::max(worst, std::sqrt(num) / std::max(1e-12, std::sqrt(den)));
    }
    detail = "history monotone, controls boxed, gradient deviation " + fmt9(worst);
    return worst <= 0.05;
}

// --------------------------------------------------------------- criterion 11
bool reproducibility(std::string& detail) {
    Config c = preset_config("setting1");
    c.n_followers = 15;
    c.n_leaders = 2;
    c.scenario.horizon_steps = 60;
    c.seed = 4;
    c.deterministic = true;

    auto slurp_dir = [](const fs::path& dir) {
        std::map<std::string, std::string> out;
        for (const auto& e : fs::recursive_directory_iterator(dir))
            if (e.is_regular_file()) {
                std::ifstream in(e.path(), std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                out[e.path().filename().string()] = ss.str();
            }
        return out;
    };

    fs::path root = fs::temp_directory_path() / "crowd_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);
    run_experiment(c, (root / "a").string());
    rerun_manifest((root / "a" / "manifest.json").string(), (root / "b").string());
    rerun_manifest((root / "a" / "manifest.json").string(), (root / "c").string());

    auto fa = slurp_dir(root / "a"), fb = slurp_dir(root / "b"), fc = slurp_dir(root / "c");
    if (fa.size() != fb.size() || fb.size() != fc.size()) {
        detail = "output file sets differ";
        return false;
    }
    for (const auto& [name, bytes] : fa) {
        if (fb.at(name) != bytes || fc.at(name) != bytes) {
            detail = "byte mismatch in " + name;
            return false;
        }
    }
    detail = "two manifest re-runs byte-identical across " + std::to_string(fa.size()) +
             " files";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "unit-kernel exactness", kernel_exactness},
        {2, "setting 0 herding vs leader count", setting0_herding},
        {3, "setting 1 microscopic strategy ordering", setting1_micro_ordering},
        {4, "mpc consistency and horizon benefit", mpc_consistency},
        {5, "kinetic mass conservation", meso_mass_conservation},
        {6, "kinetic diffusion coefficient", meso_diffusion_floor},
        {7, "micro/meso empirical-measure consistency", micro_meso_consistency},
        {8, "setting 1 mesoscopic strategy ordering", setting1_meso_ordering},
        {9, "setting 3 smart obstacles", setting3_smart_obstacles},
        {10, "optimizer invariants", optimizer_invariants},
        {11, "manifest reproducibility", reproducibility},
    };

    std::set<int> want;
    for (int i = 1; i < argc; ++i) want.insert(std::atoi(argv[i]));

    int failures = 0;
    for (auto& cr : criteria) {
        if (!want.empty() && !want.count(cr.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = cr.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", cr.id,
                    cr.name.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
