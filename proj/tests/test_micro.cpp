#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "crowd/config.hpp"
#include "crowd/micro.hpp"

using namespace crowd;

namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

Scenario everywhere_visible(Vec2 target) {
    Scenario sc;
    sc.target = target;
    sc.visibility.kind = VisibilityRegion::Kind::Everywhere;
    sc.exit.kind = ExitPredicate::Kind::None;
    return sc;
}

Scenario nothing_visible() {
    Scenario sc;
    sc.visibility.kind = VisibilityRegion::Kind::Nowhere;
    sc.exit.kind = ExitPredicate::Kind::None;
    return sc;
}

ModelParams setting1_params() {
    ModelParams p;
    p.n_topo = 10;
    p.c_r_f = 2.0;
    p.c_r_l = 1.5;
    p.c_a = 3.0;
    p.c_z = 0.2;
    p.c_tau = 1.0;
    p.c_s = 1.0;
    p.s_sq = 0.5;
    p.r = 0.4;
    p.zeta = 0.4;
    p.gamma = 1.0;
    p.sigma_sq = 0.0;
    p.dt = 0.1;
    return p;
}

}  // namespace

TEST_CASE("self propulsion values") {
    ModelParams p = setting1_params();

    // outside Sigma with zero state and zero draw, everything vanishes
    Scenario out = nothing_visible();
    Vec2 a1 = self_propulsion({0, 0}, {0, 0}, {0, 0}, p, out);
    CHECK(a1 == Vec2{0, 0});

    // inside Sigma, target pull plus speed relaxation
    Scenario in = everywhere_visible({30, 10});
    Vec2 a2 = self_propulsion({29, 10}, {1, 0}, {0, 0}, p, in);
    CHECK(close_rel(a2.x, -0.5));
    CHECK(a2.y == 0.0);

    Vec2 a3 = self_propulsion({29, 10}, {std::sqrt(0.5), 0}, {0, 0}, p, in);
    CHECK(close_rel(a3.x, 1.0 - std::sqrt(0.5)));
    CHECK(close_rel(a3.y, 0.0));

    // singularity guard at the target itself
    Vec2 a4 = self_propulsion({30, 10}, {0, 0}, {0, 0}, p, in);
    CHECK(a4 == Vec2{0, 0});

    // drift part drops exactly the noise kick
    Vec2 z{0.3, -0.7};
    Vec2 full = self_propulsion({0, 0}, {0.2, 0.1}, z, p, out);
    Vec2 drift = propulsion_drift({0, 0}, {0.2, 0.1}, p, out);
    CHECK(close_rel(full.x - drift.x, p.c_z * z.x));
    CHECK(close_rel(full.y - drift.y, p.c_z * z.y));
}

TEST_CASE("follower interaction values") {
    ModelParams p = setting1_params();
    p.c_r_f = 2.0;

    // inside Sigma beyond repulsion range: nothing
    Scenario in = everywhere_visible({30, 10});
    Vec2 h1 = follower_interaction({0, 0}, {0, 0}, {1, 0}, {1, 1}, 100.0, 5.0, p, in);
    CHECK(h1 == Vec2{0, 0});

    // repulsion only
    Vec2 h2 = follower_interaction({0, 0}, {0, 0}, {0.2, 0}, {0, 0}, 0.0, 1.0, p, in);
    CHECK(close_rel(h2.x, -2.0 * std::exp(-0.2)));
    CHECK(h2.y == 0.0);

    // alignment only: theta=1, partner in ball beyond repulsion range
    Scenario out = nothing_visible();
    Vec2 h3 = follower_interaction({0, 0}, {0, 0}, {1, 0}, {1, 0}, 4.0, 2.0, p, out);
    CHECK(close_rel(h3.x, 1.5));
    CHECK(h3.y == 0.0);
}

TEST_CASE("leader velocity values") {
    ModelParams p = setting1_params();
    CrowdState st;
    st.leaders.push_back({{0, 0}, {0, 0}});

    SUBCASE("no agents within range") {
        st.followers.push_back({{5, 5}, {0, 0}, false});
        CHECK(leader_velocity(0, st, {1, 0}, p) == Vec2{1, 0});
    }
    SUBCASE("single follower repulsion with zeta=1") {
        p.zeta = 1.0;
        p.c_r_l = 1.5;
        st.followers.push_back({{0.2, 0}, {0, 0}, false});
        Vec2 w = leader_velocity(0, st, {0, 0}, p);
        CHECK(close_rel(w.x, -1.5 * std::exp(-0.2)));
        CHECK(w.y == 0.0);
    }
    SUBCASE("zero leader repulsion returns the control exactly") {
        p.c_r_l = 0.0;
        st.followers.push_back({{0.2, 0}, {0, 0}, false});
        st.leaders.push_back({{0.1, 0.1}, {0, 0}});
        CHECK(leader_velocity(0, st, {0.3, -0.4}, p) == Vec2{0.3, -0.4});
    }
    SUBCASE("evacuated followers exert nothing") {
        st.followers.push_back({{0.2, 0}, {0, 0}, true});
        CHECK(leader_velocity(0, st, {1, 0}, p) == Vec2{1, 0});
    }
}

TEST_CASE("micro step basics") {
    ModelParams p = setting1_params();
    p.c_r_f = 0;
    p.c_a = 0;
    p.c_z = 0;
    p.c_tau = 0;
    p.c_s = 0;
    Scenario sc = nothing_visible();
    RandomSource rng(1);

    SUBCASE("free follower drift") {
        CrowdState st;
        st.followers.push_back({{0, 0}, {1, 0}, false});
        CrowdState next = micro_step(st, {}, p, sc, rng);
        CHECK(close_rel(next.followers[0].position.x, 0.1));
        CHECK(next.followers[0].velocity == Vec2{1, 0});
        CHECK(next.step == 1);
        CHECK(close_rel(next.time, 0.1));
    }
    SUBCASE("free leader drift") {
        CrowdState st;
        st.leaders.push_back({{0, 0}, {0, 0}});
        CrowdState next = micro_step(st, {{1, 0}}, p, sc, rng);
        CHECK(close_rel(next.leaders[0].position.x, 0.1));
    }
    SUBCASE("control dimension mismatch is rejected") {
        CrowdState st;
        st.leaders.push_back({{0, 0}, {0, 0}});
        CHECK_THROWS_AS(micro_step(st, {}, p, sc, rng), std::invalid_argument);
    }
}

TEST_CASE("micro step repulsion pair") {
    // two followers 0.2 apart, at rest, no noise: velocities become
    // -/+ dt * 2 e^{-0.2}, positions unchanged
    ModelParams p = setting1_params();
    Scenario sc = nothing_visible();  // theta = 1, but v=0 and sigma=0 kill A
    RandomSource rng(1);
    CrowdState st;
    st.followers.push_back({{0, 0}, {0, 0}, false});
    st.followers.push_back({{0.2, 0}, {0, 0}, false});
    CrowdState next = micro_step(st, {}, p, sc, rng);
    const double expect = 0.1 * 2.0 * std::exp(-0.2);
    CHECK(close_rel(next.followers[0].velocity.x, -expect, 1e-12));
    CHECK(close_rel(next.followers[1].velocity.x, expect, 1e-12));
    CHECK(next.followers[0].position == Vec2{0, 0});
    CHECK(next.followers[1].position == Vec2{0.2, 0});

    // same outcome inside Sigma when the target pull is disabled
    ModelParams p2 = p;
    p2.c_tau = 0.0;
    Scenario in = everywhere_visible({30, 10});
    CrowdState next2 = micro_step(st, {}, p2, in, rng);
    CHECK(close_rel(next2.followers[0].velocity.x, -expect, 1e-12));
}

TEST_CASE("micro step determinism") {
    Config c = preset_config("setting1");
    c.n_followers = 40;
    c.n_leaders = 2;
    CrowdState st = make_crowd(c, RandomSource(5));
    RandomSource rng(5);
    std::vector<Vec2> u = {{1, 0}, {0.5, 0.5}};
    CrowdState a = st, b = st;
    for (int i = 0; i < 20; ++i) {
        a = micro_step(a, u, c.model, c.scenario, rng);
        b = micro_step(b, u, c.model, c.scenario, rng);
    }
    REQUIRE(a.followers.size() == b.followers.size());
    for (size_t i = 0; i < a.followers.size(); ++i) {
        CHECK(std::memcmp(&a.followers[i].position, &b.followers[i].position,
                          sizeof(Vec2)) == 0);
        CHECK(std::memcmp(&a.followers[i].velocity, &b.followers[i].velocity,
                          sizeof(Vec2)) == 0);
    }
}

TEST_CASE("follower count non-increasing, evacuated stay out") {
    Config c = preset_config("setting1");
    c.n_followers = 30;
    c.n_leaders = 2;
    CrowdState st = make_crowd(c, RandomSource(9));
    RandomSource rng(9);
    int prev_active = st.active_followers();
    std::vector<bool> evac(st.followers.size(), false);
    for (int step = 0; step < 300; ++step) {
        std::vector<Vec2> u(2);
        for (int k = 0; k < 2; ++k)
            u[k] = go_to_target(st.leaders[k].position, c.scenario.target);
        st = micro_step(st, u, c.model, c.scenario, rng);
        int active = st.active_followers();
        CHECK(active <= prev_active);
        prev_active = active;
        for (size_t i = 0; i < st.followers.size(); ++i) {
            if (evac[i]) CHECK(st.followers[i].evacuated);
            evac[i] = st.followers[i].evacuated;
        }
    }
    CHECK(st.evacuated_followers() > 0);  // some of the crowd reaches the exit
}

TEST_CASE("target relaxation matches the Euler recursion") {
    // with only the target term active the discrete dynamics is
    // v_{n+1} = (1 - dt c_tau) v_n + dt c_tau d(x_n)
    ModelParams p = setting1_params();
    p.c_r_f = p.c_r_l = p.c_a = p.c_z = p.c_s = 0.0;
    p.c_tau = 0.7;
    Scenario sc = everywhere_visible({100, 0});
    RandomSource rng(1);

    CrowdState st;
    st.followers.push_back({{0, 0}, {0.3, -0.4}, false});
    Vec2 v_ref = {0.3, -0.4};
    Vec2 x_ref = {0, 0};
    double prev_err = 10.0;
    for (int n = 0; n < 60; ++n) {
        st = micro_step(st, {}, p, sc, rng);
        Vec2 dir = (sc.target - x_ref).unit_or_zero();
        Vec2 v_next = v_ref * (1.0 - p.dt * p.c_tau) + dir * (p.dt * p.c_tau);
        x_ref += v_ref * p.dt;
        v_ref = v_next;
        CHECK(std::abs(st.followers[0].velocity.x - v_ref.x) < 1e-13);
        CHECK(std::abs(st.followers[0].velocity.y - v_ref.y) < 1e-13);
        double err = (st.followers[0].velocity - (sc.target - x_ref).unit_or_zero()).norm();
        CHECK(err < prev_err + 1e-12);  // geometric approach to the unit vector
        prev_err = err;
    }
    CHECK(prev_err < 0.02);
}

TEST_CASE("wall resolution") {
    std::vector<Wall> walls = {{{1, -1}, {1, 1}, 0.0}};

    SUBCASE("parallel motion does not touch the wall") {
        Vec2 pos{0.0, 0.5}, vel{0, 1};
        resolve_walls({0.0, -0.5}, pos, vel, walls);
        CHECK(pos == Vec2{0.0, 0.5});
        CHECK(vel == Vec2{0, 1});
    }
    SUBCASE("head-on stop") {
        Vec2 pos{1.5, 0.0}, vel{1, 0};
        resolve_walls({0.5, 0.0}, pos, vel, walls);
        CHECK(pos.x == doctest::Approx(1.0 - 1e-3));
        CHECK(vel == Vec2{0, 0});
    }
    SUBCASE("sliding contact keeps the tangential component") {
        Vec2 pos{1.5, -0.5}, vel{1, -1};
        resolve_walls({0.5, 0.5}, pos, vel, walls);
        CHECK(pos.x == doctest::Approx(1.0 - 1e-3));
        CHECK(vel.x == 0.0);
        CHECK(vel.y == doctest::Approx(-1.0));
    }
}

TEST_CASE("hard sphere filter") {
    CrowdState old_state, proposed;
    auto add = [](CrowdState& s, Vec2 p, Vec2 v) {
        s.followers.push_back({p, v, false});
    };

    SUBCASE("diameter zero changes nothing") {
        add(old_state, {0, 0}, {1, 0});
        add(proposed, {0.1, 0}, {1, 0});
        CrowdState out = hard_sphere_filter(old_state, proposed, 0.0);
        CHECK(out.followers[0].position == Vec2{0.1, 0});
    }
    SUBCASE("converging pair freezes") {
        add(old_state, {0, 0}, {1, 0});
        add(old_state, {0.5, 0}, {-1, 0});
        add(proposed, {0.15, 0}, {1, 0});
        add(proposed, {0.35, 0}, {-1, 0});
        CrowdState out = hard_sphere_filter(old_state, proposed, 0.25);
        CHECK(out.followers[0].position == Vec2{0, 0});
        CHECK(out.followers[1].position == Vec2{0.5, 0});
        CHECK(out.followers[0].velocity == Vec2{1, 0});  // velocity retained
    }
    SUBCASE("well separated moves are accepted") {
        add(old_state, {0, 0}, {1, 0});
        add(old_state, {2.0, 0}, {-1, 0});
        add(proposed, {0.5, 0}, {1, 0});
        add(proposed, {1.5, 0}, {-1, 0});
        CrowdState out = hard_sphere_filter(old_state, proposed, 0.25);
        CHECK(out.followers[0].position == Vec2{0.5, 0});
        CHECK(out.followers[1].position == Vec2{1.5, 0});
    }
    SUBCASE("post state keeps pre-existing proximity only") {
        RandomSource rng(23);
        for (int rep = 0; rep < 30; ++rep) {
            CrowdState os, ps;
            const int n = 12;
            for (int i = 0; i < n; ++i) {
                Vec2 p{rng.uniform(0, 2), rng.uniform(0, 2)};
                Vec2 step{rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
                add(os, p, {1, 0});
                add(ps, p + step, {1, 0});
            }
            CrowdState out = hard_sphere_filter(os, ps, 0.25);
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    double after = dist(out.followers[i].position, out.followers[j].position);
                    double before = dist(os.followers[i].position, os.followers[j].position);
                    CHECK((after >= 0.25 || before < 0.25));
                }
            }
        }
    }
}

TEST_CASE("velocity cap bounds blow-ups") {
    ModelParams p = setting1_params();
    p.c_r_f = 1e9;
    Scenario sc = nothing_visible();
    RandomSource rng(2);
    CrowdState st;
    st.followers.push_back({{0, 0}, {0, 0}, false});
    st.followers.push_back({{0.05, 0}, {0, 0}, false});
    CrowdState next = micro_step(st, {}, p, sc, rng);
    CHECK(next.followers[0].velocity.norm() <= p.v_max + 1e-12);
    CHECK(next.followers[1].velocity.norm() <= p.v_max + 1e-12);
}
