#include "crowd/mpc.hpp"

#include <algorithm>
#include <cmath>

namespace crowd {

namespace {

std::vector<Vec2> unflatten_step(const std::vector<double>& flat_u, int step, int nl) {
    std::vector<Vec2> u(nl);
    for (int k = 0; k < nl; ++k)
        u[k] = {flat_u[2 * (step * nl + k)], flat_u[2 * (step * nl + k) + 1]};
    return u;
}

}  // namespace

double mpc_rollout_cost(const CrowdState& state, const std::vector<double>& flat_u,
                        int n_mpc, const CostWeights& w, const ModelParams& p,
                        const Scenario& sc) {
    ModelParams model = p;
    model.sigma_sq = 0.0;  // certainty-equivalent internal model
    const int nl = static_cast<int>(state.leaders.size());
    const RandomSource null_rng(0);

    CrowdState s = state;
    double cost = 0.0;
    for (int n = 0; n < n_mpc; ++n) {
        std::vector<Vec2> u = unflatten_step(flat_u, n, nl);
        cost += running_cost(s, u, w, sc.target);
        if (n + 1 < n_mpc) s = micro_step(s, u, model, sc, null_rng);
    }
    return cost;
}

std::function<double(const std::vector<double>&)> mpc_objective(
    const CrowdState& state, int n_mpc, const CostWeights& w, const ModelParams& p,
    const Scenario& sc) {
    return [state, n_mpc, w, p, sc](const std::vector<double>& u) {
        return mpc_rollout_cost(state, u, n_mpc, w, p, sc);
    };
}

std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& u, double h) {
    std::vector<double> g(u.size());
    std::vector<double> probe = u;
    for (size_t c = 0; c < u.size(); ++c) {
        probe[c] = u[c] + h;
        const double fp = f(probe);
        probe[c] = u[c] - h;
        const double fm = f(probe);
        probe[c] = u[c];
        g[c] = (fp - fm) / (2.0 * h);
    }
    return g;
}

std::vector<Vec2> mpc_step(const CrowdState& state, const MpcConfig& cfg,
                           const CostWeights& w, const ModelParams& p, const Scenario& sc,
                           std::vector<double>* warm) {
    const int nl = static_cast<int>(state.leaders.size());
    const int dim = 2 * nl * cfg.n_mpc;
    if (nl == 0) return {};

    auto objective = mpc_objective(state, cfg.n_mpc, w, p, sc);

    std::vector<double> u(dim, 0.0);
    double cost = objective(u);
    if (warm && static_cast<int>(warm->size()) == dim) {
        for (double& c : *warm) c = std::clamp(c, -cfg.u_bound, cfg.u_bound);
        const double warm_cost = objective(*warm);
        if (warm_cost < cost) {  // never start worse than zero control
            u = *warm;
            cost = warm_cost;
        }
    }

    std::vector<double> probe = u;
    const double h = cfg.fd_step;
    for (int sweep = 0; sweep < cfg.inner_iterations; ++sweep) {
        const double sweep_start = cost;
        for (int c = 0; c < dim; ++c) {
            probe = u;
            probe[c] = u[c] + h;
            const double fp = objective(probe);
            probe[c] = u[c] - h;
            const double fm = objective(probe);
            probe[c] = u[c];
            const double g = (fp - fm) / (2.0 * h);
            if (g == 0.0) continue;
            double alpha = 1.0;
            for (int bt = 0; bt < 10; ++bt) {
                probe = u;
                probe[c] = std::clamp(u[c] - alpha * g, -cfg.u_bound, cfg.u_bound);
                if (probe[c] == u[c]) break;
                const double trial = objective(probe);
                if (trial < cost) {
                    u[c] = probe[c];
                    cost = trial;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if (sweep_start - cost <= 1e-14 * std::max(1.0, std::abs(sweep_start))) break;
    }

    if (warm) *warm = u;
    return unflatten_step(u, 0, nl);
}

std::vector<Vec2> instantaneous_control(const CrowdState& state, const CostWeights& w,
                                        const ModelParams& p, const Scenario& sc,
                                        double u_bound) {
    const int nl = static_cast<int>(state.leaders.size());
    const int dim = 2 * nl;
    if (nl == 0) return {};

    // One-step lookahead objective: control cost now plus state cost after a
    // single noise-free step (identical to the N_mpc = 2 rollout with the
    // trailing control optimized out to zero).
    auto objective = mpc_objective(state, 2, w, p, sc);
    auto padded = [&](const std::vector<double>& u) {
        std::vector<double> full(2 * dim, 0.0);
        std::copy(u.begin(), u.end(), full.begin());
        return objective(full);
    };

    std::vector<double> u(dim, 0.0);
    double cost = padded(u);
    const double h = 1e-2;
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> g(dim);
        std::vector<double> probe = u;
        for (int c = 0; c < dim; ++c) {
            probe[c] = u[c] + h;
            const double fp = padded(probe);
            probe[c] = u[c] - h;
            const double fm = padded(probe);
            probe[c] = u[c];
            g[c] = (fp - fm) / (2.0 * h);
        }
        double gnorm = 0.0;
        for (double v : g) gnorm += v * v;
        gnorm = std::sqrt(gnorm);
        if (gnorm < 1e-12) break;

        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<double> trial(dim);
            double step_sq = 0.0;
            for (int c = 0; c < dim; ++c) {
                trial[c] = std::clamp(u[c] - alpha * g[c], -u_bound, u_bound);
                step_sq += (trial[c] - u[c]) * (trial[c] - u[c]);
            }
            if (step_sq == 0.0) break;
            const double tc = padded(trial);
            if (tc < cost) {
                u = std::move(trial);
                cost = tc;
                moved = std::sqrt(step_sq) > 1e-10;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }

    std::vector<Vec2> out(nl);
    for (int k = 0; k < nl; ++k) out[k] = {u[2 * k], u[2 * k + 1]};
    return out;
}

}  // namespace crowd
