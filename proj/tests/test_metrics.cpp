#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crowd/config.hpp"
#include "crowd/metrics.hpp"
#include "crowd/runner.hpp"

using namespace crowd;

namespace {

Scenario sigma_disk() {
    Scenario sc;
    sc.target = {0, 0};
    sc.visibility.kind = VisibilityRegion::Kind::Disk;
    sc.visibility.center = {0, 0};
    sc.visibility.radius = 1.0;
    return sc;
}

}  // namespace

TEST_CASE("occupancy of sigma") {
    Scenario sc = sigma_disk();
    CrowdState st;
    CHECK(occupancy_of_sigma(st, sc) == 0.0);

    for (int i = 0; i < 5; ++i) st.followers.push_back({{0.1 * i, 0}, {0, 0}, false});
    CHECK(occupancy_of_sigma(st, sc) == 5.0);

    st.followers.push_back({{3, 0}, {0, 0}, false});   // outside
    st.followers.push_back({{0, 0}, {0, 0}, true});    // evacuated
    CHECK(occupancy_of_sigma(st, sc) == 5.0);

    ParticleEnsemble ens;
    ens.n_s = 4;
    ens.particle_weight = 0.5;
    ens.total_mass = 2.0;
    ens.samples = {{{0, 0}, {0, 0}, true},
                   {{0.5, 0}, {0, 0}, true},
                   {{5, 0}, {0, 0}, true},
                   {{0, 0.2}, {0, 0}, false}};
    CHECK(occupancy_of_sigma(ens, sc) == doctest::Approx(1.0));

    // occupancy never exceeds the active amount
    CHECK(occupancy_of_sigma(st, sc) <= st.active_followers());
}

TEST_CASE("evacuated fraction") {
    CHECK(evacuated_fraction(150, 150) == 0.0);
    CHECK(evacuated_fraction(0, 150) == 1.0);
    CHECK(evacuated_fraction(75, 150) == doctest::Approx(0.5));
    CHECK_THROWS(evacuated_fraction(1, 0));
}

TEST_CASE("consensus detector") {
    auto make_series = [](int n, double phi, Vec2 vhat) {
        std::vector<StepStats> s(n);
        for (auto& e : s) {
            e.polarization = phi;
            e.mean_vhat = vhat;
        }
        return s;
    };

    // fully aligned crowd
    auto aligned = make_series(80, 1.0, {1, 0});
    CHECK(consensus_detector(aligned, {1, 0}, 50));

    // two equal opposite groups cancel
    auto split = make_series(80, 0.0, {0, 0});
    CHECK_FALSE(consensus_detector(split, {1, 0}, 50));

    // aligned but along the wrong direction
    auto wrong = make_series(80, 1.0, {0, 1});
    CHECK_FALSE(consensus_detector(wrong, {1, 0}, 50));

    // a window shorter than required never fires
    auto brief = make_series(30, 1.0, {1, 0});
    CHECK_FALSE(consensus_detector(brief, {1, 0}, 50));

    // interrupted run must restart the count
    auto interrupted = make_series(80, 1.0, {1, 0});
    interrupted[40].polarization = 0.0;
    CHECK_FALSE(consensus_detector(interrupted, {1, 0}, 50));
    auto recovered = make_series(120, 1.0, {1, 0});
    recovered[40].polarization = 0.0;
    CHECK(consensus_detector(recovered, {1, 0}, 50));
}

TEST_CASE("polarization excludes zero velocities") {
    CrowdState st;
    st.followers.push_back({{0, 0}, {0, 0}, false});
    st.followers.push_back({{1, 0}, {2, 0}, false});
    st.followers.push_back({{2, 0}, {0.5, 0}, false});
    StepStats s;
    polarization_sample(st, s);
    CHECK(s.zero_excluded == 1);
    CHECK(s.polarization == doctest::Approx(1.0));
    CHECK(s.mean_vhat.x == doctest::Approx(1.0));

    CrowdState all_zero;
    all_zero.followers.push_back({{0, 0}, {0, 0}, false});
    polarization_sample(all_zero, s);
    CHECK(s.polarization == 0.0);
    CHECK(s.zero_excluded == 1);
}

TEST_CASE("failure rate") {
    std::vector<ReplicateOutcome> all_good(10);
    for (auto& o : all_good) o.success = true;
    CHECK(failure_rate(all_good) == 0.0);

    std::vector<ReplicateOutcome> all_bad(10);
    CHECK(failure_rate(all_bad) == 1.0);

    std::vector<ReplicateOutcome> none;
    CHECK_THROWS(failure_rate(none));
}

TEST_CASE("failure rate is consistent across disjoint batches") {
    // identical configuration, disjoint seed ranges: the two estimates must
    // agree within the binomial confidence width
    Config c = preset_config("setting1");
    c.n_followers = 25;
    c.n_leaders = 2;
    c.scenario.horizon_steps = 250;
    c.output.trajectory = false;
    LeaderStrategy gtt;
    gtt.kind = LeaderStrategy::Kind::GoToTarget;

    auto batch_rate = [&](std::uint64_t seed0, int n) {
        std::vector<ReplicateOutcome> outs;
        for (int i = 0; i < n; ++i) {
            RunOptions opt;
            opt.record_series = false;
            opt.stop_at_evacuated = c.n_followers - 5;
            SimResult r = run_micro(c, gtt, seed0 + i, opt);
            ReplicateOutcome o;
            o.success = r.threshold_step >= 0;
            outs.push_back(o);
        }
        return failure_rate(outs);
    };

    const int n = 60;
    double r1 = batch_rate(1, n);
    double r2 = batch_rate(1001, n);
    double pool = 0.5 * (r1 + r2);
    double width = 1.96 * std::sqrt(std::max(0.05, pool * (1.0 - pool)) * (2.0 / n));
    CHECK(std::abs(r1 - r2) <= width);
}

TEST_CASE("mean, median, confidence intervals") {
    std::vector<double> v = {1, 2, 3, 4, 100};
    MeanCi m = mean_ci(v);
    CHECK(m.mean == doctest::Approx(22.0));
    CHECK(median(v) == 3.0);
    CHECK(median({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
    CHECK(binomial_ci_half_width(0.5, 100) == doctest::Approx(1.96 * 0.05));
    CHECK(binomial_ci_half_width(0.0, 100) == 0.0);
}
