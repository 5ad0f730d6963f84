#ifndef CROWD_MPC_HPP
#define CROWD_MPC_HPP

#include <functional>
#include <vector>

#include "crowd/costs.hpp"
#include "crowd/micro.hpp"
#include "crowd/params.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"

namespace crowd {

struct MpcConfig {
    int n_mpc = 2;             // >= 2; 2 recovers the instantaneous controller
    int inner_iterations = 50; // coordinate-descent sweeps
    double u_bound = 1.0;      // box constraint per control component
    double fd_step = 1e-3;     // central-difference step on the rollout cost
};

// Finite-horizon cost of a flattened control sequence
// [step0 leader0 x, step0 leader0 y, step0 leader1 x, ...], rolled out with
// the noise-free dynamics (the controller's internal model sets sigma = 0).
double mpc_rollout_cost(const CrowdState& state, const std::vector<double>& flat_u,
                        int n_mpc, const CostWeights& w, const ModelParams& p,
                        const Scenario& sc);

// The rollout objective as a callable, for gradient checks.
std::function<double(const std::vector<double>&)> mpc_objective(
    const CrowdState& state, int n_mpc, const CostWeights& w, const ModelParams& p,
    const Scenario& sc);

// Central finite-difference gradient.
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& u, double h);

// Receding-horizon step: minimizes the rollout cost over the box-constrained
// control sequence by projected coordinate descent with finite-difference
// derivatives, then returns only the first control.  The incumbent never
// moves to a worse point, so the result is at least as good as zero control
// (or the warm start, when one is supplied through `warm`, which is updated
// with the full optimal sequence for reuse at the next step).
std::vector<Vec2> mpc_step(const CrowdState& state, const MpcConfig& cfg,
                           const CostWeights& w, const ModelParams& p, const Scenario& sc,
                           std::vector<double>* warm = nullptr);

// Independent one-step minimizer (projected gradient descent with a wider
// finite-difference step); the N_mpc = 2 controller must agree with it.
std::vector<Vec2> instantaneous_control(const CrowdState& state, const CostWeights& w,
                                        const ModelParams& p, const Scenario& sc,
                                        double u_bound);

}  // namespace crowd

#endif
