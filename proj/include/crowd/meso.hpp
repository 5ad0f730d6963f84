#ifndef CROWD_MESO_HPP
#define CROWD_MESO_HPP

#include <vector>

#include "crowd/ensemble.hpp"
#include "crowd/kernels.hpp"
#include "crowd/params.hpp"
#include "crowd/rng.hpp"
#include "crowd/scenario.hpp"

namespace crowd {

// Per-step topological-ball estimate for every active sample.
//
// The ball is the minimal one holding follower mass plus leader mass of at
// least n_topo, estimated against a uniformly thinned subsample (default
// 1000 points) plus all leaders; n_star is the mass inside the closed ball,
// which reduces to the microscopic agent count on an exact empirical
// measure.  For large ensembles the radius/n_star fields are evaluated on a
// coarse grid and interpolated; they are smooth population statistics, so
// the subsampling and the interpolation sit on the same footing.
struct BallContext {
    std::vector<double> radius_sq;  // indexed by sample id
    std::vector<double> n_star;
    long degenerate = 0;
};

struct KineticOptions {
    bool deterministic = false;  // exhaustive pair/leader means, interaction prob 1
    int subsample = 1000;
    int grid_nx = 48;
    int grid_ny = 48;
    bool use_grid = true;        // grid estimate when the ensemble is large
};

BallContext build_ball_context(const ParticleEnsemble& ens, const LeaderSwarm& swarm,
                               const ModelParams& p, const KineticOptions& opt);

// Exact mass-ball queries against a fixed weighted point cloud, served from
// a bucket grid with ring expansion so each query touches only the points
// near the quantile radius.  Agrees with mass_ball on every query.
class RingBallSolver {
public:
    RingBallSolver(std::vector<Vec2> pts, double point_mass, std::vector<Vec2> units,
                   double need_mass);
    MassBallResult query(const Vec2& q);

private:
    std::vector<Vec2> pts_;
    std::vector<Vec2> units_;
    double w_;
    double need_;
    Vec2 lo_{};
    double cell_ = 1.0;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::vector<int>> buckets_;
    std::vector<double> collected_;
    std::vector<double> u2_;
};

// Binary follower-follower rule: both velocities move by
// eta_f * [theta C_z xi + S + mass_f H], with independent noise draws.
// Noise components are truncated at five standard deviations.
struct VelocityPair {
    Vec2 v_p;
    Vec2 v_q;
};
VelocityPair binary_follower_interaction(const SamplePoint& sp, const SamplePoint& sq,
                                         const Vec2& xi_p, const Vec2& xi_q,
                                         double ball_p_radius_sq, double ball_p_n_star,
                                         double ball_q_radius_sq, double ball_q_n_star,
                                         const KineticScaling& sc, double mass_f,
                                         const ModelParams& p, const Scenario& scen);

// Binary follower-leader rule: v <- v + eta_l * mass_l * H; the leader is
// unaffected.
Vec2 binary_leader_interaction(const SamplePoint& sp, const LeaderState& leader,
                               double ball_radius_sq, double ball_n_star,
                               const KineticScaling& sc, double mass_l,
                               const ModelParams& p, const Scenario& scen);

// One step of the meshless binary-interaction Monte Carlo scheme coupled to
// the leader ODEs.  All interactions read the step-start state; with an
// exact empirical measure, deterministic mode and dt = epsilon this
// reproduces micro_step.
//
// Requires dt * lambda_f * mass_f <= 1 (checked at configuration load).
struct KineticStepResult {
    long pair_interactions = 0;
    long leader_interactions = 0;
};
KineticStepResult kinetic_step(ParticleEnsemble& ens, LeaderSwarm& swarm,
                               const std::vector<Vec2>& controls, double dt, long step,
                               const KineticScaling& sc, const ModelParams& p,
                               const Scenario& scen, const RandomSource& rng,
                               const KineticOptions& opt, BallContext* ctx_out = nullptr);

}  // namespace crowd

#endif
