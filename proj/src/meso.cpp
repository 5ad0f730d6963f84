#include "crowd/meso.hpp"

#include <algorithm>
#include <cmath>

#include "crowd/micro.hpp"

namespace crowd {

namespace {

Vec2 truncate_noise(Vec2 xi, double sigma) {
    const double cap = 5.0 * sigma;
    xi.x = std::clamp(xi.x, -cap, cap);
    xi.y = std::clamp(xi.y, -cap, cap);
    return xi;
}

void cap_velocity(Vec2& v, double v_max) {
    double n2 = v.norm_sq();
    if (n2 > v_max * v_max) v *= v_max / std::sqrt(n2);
}

std::vector<int> thin_subsample(const std::vector<int>& active_ids, int k) {
    const int n = static_cast<int>(active_ids.size());
    if (n <= k) return active_ids;
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i)
        out[i] = active_ids[static_cast<int>((static_cast<long>(i) * n) / k)];
    return out;
}

}  // namespace

RingBallSolver::RingBallSolver(std::vector<Vec2> pts, double point_mass,
                               std::vector<Vec2> units, double need_mass)
    : pts_(std::move(pts)), units_(std::move(units)), w_(point_mass), need_(need_mass) {
    Vec2 hi = pts_.empty() ? Vec2{0, 0} : pts_[0];
    lo_ = hi;
    for (const Vec2& q : pts_) {
        lo_.x = std::min(lo_.x, q.x); lo_.y = std::min(lo_.y, q.y);
        hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
    }
    const double ext_x = hi.x - lo_.x, ext_y = hi.y - lo_.y;
    const double max_ext = std::max({ext_x, ext_y, 1e-6});
    const double total = w_ * pts_.size() + units_.size();
    // aim the cell near the expected quantile radius so a query touches only
    // a few rings
    const double est_r =
        std::sqrt(std::max(1e-12, ext_x * ext_y * need_ / (std::max(total, need_) * 3.14159)));
    cell_ = std::clamp(est_r, max_ext / 96.0, max_ext);
    nx_ = static_cast<int>(ext_x / cell_) + 1;
    ny_ = static_cast<int>(ext_y / cell_) + 1;
    buckets_.assign(static_cast<size_t>(nx_) * ny_, {});
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
        int ix = std::min(nx_ - 1, static_cast<int>((pts_[i].x - lo_.x) / cell_));
        int iy = std::min(ny_ - 1, static_cast<int>((pts_[i].y - lo_.y) / cell_));
        buckets_[static_cast<size_t>(iy) * nx_ + ix].push_back(i);
    }
}

MassBallResult RingBallSolver::query(const Vec2& q) {
    collected_.clear();
    u2_.clear();
    for (const Vec2& u : units_) u2_.push_back(dist_sq(q, u));
    std::sort(u2_.begin(), u2_.end());

    const int ci = std::clamp(static_cast<int>((q.x - lo_.x) / cell_), 0, nx_ - 1);
    const int cj = std::clamp(static_cast<int>((q.y - lo_.y) / cell_), 0, ny_ - 1);
    const int max_ring = nx_ + ny_;
    size_t seen = 0;

    auto visit_cell = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return;
        for (int id : buckets_[static_cast<size_t>(iy) * nx_ + ix]) {
            collected_.push_back(dist_sq(q, pts_[id]));
            ++seen;
        }
    };

    for (int ring = 0; ring <= max_ring; ++ring) {
        if (ring == 0) {
            visit_cell(ci, cj);
        } else {
            for (int ix = ci - ring; ix <= ci + ring; ++ix) {
                visit_cell(ix, cj - ring);
                visit_cell(ix, cj + ring);
            }
            for (int iy = cj - ring + 1; iy <= cj + ring - 1; ++iy) {
                visit_cell(ci - ring, iy);
                visit_cell(ci + ring, iy);
            }
        }
        const bool have_all = seen == pts_.size();
        const double collected_mass = w_ * collected_.size() + units_.size();
        if (collected_mass >= need_ || have_all) {
            MassBallResult cand = weighted_distance_quantile(collected_, w_, u2_, need_);
            // any uncollected point sits at least ring * cell away
            const double lb = ring * cell_;
            if (have_all || cand.radius_sq < lb * lb * (1.0 - 1e-9)) return cand;
        }
    }
    return weighted_distance_quantile(collected_, w_, u2_, need_);
}

BallContext build_ball_context(const ParticleEnsemble& ens, const LeaderSwarm& swarm,
                               const ModelParams& p, const KineticOptions& opt) {
    BallContext ctx;
    ctx.radius_sq.assign(ens.samples.size(), 0.0);
    ctx.n_star.assign(ens.samples.size(), 1.0);

    // Alignment (the only consumer of the ball) vanishes inside Sigma, so a
    // scenario that is visible everywhere never needs the context.
    if (p.c_a <= 0.0) return ctx;

    std::vector<int> active_ids;
    active_ids.reserve(ens.samples.size());
    for (int i = 0; i < static_cast<int>(ens.samples.size()); ++i)
        if (ens.samples[i].active) active_ids.push_back(i);
    if (active_ids.empty()) return ctx;

    const std::vector<int> sub = thin_subsample(active_ids, std::max(1, opt.subsample));
    std::vector<Vec2> sub_pos(sub.size());
    for (size_t i = 0; i < sub.size(); ++i) sub_pos[i] = ens.samples[sub[i]].position;
    std::vector<Vec2> leader_pos;
    leader_pos.reserve(swarm.leaders.size());
    for (const auto& l : swarm.leaders)
        if (!l.evacuated) leader_pos.push_back(l.position);

    const double point_mass = ens.total_mass / static_cast<double>(sub.size());
    const double need = static_cast<double>(p.n_topo);
    if (ens.total_mass + swarm.mass() < need) ctx.degenerate += active_ids.size();

    const bool exact = !opt.use_grid ||
                       static_cast<int>(active_ids.size()) <= static_cast<int>(sub.size());
    if (exact) {
        for (int id : active_ids) {
            MassBallResult b = mass_ball(ens.samples[id].position, sub_pos, point_mass,
                                         leader_pos, need);
            ctx.radius_sq[id] = b.radius_sq;
            ctx.n_star[id] = b.mass;
        }
        return ctx;
    }

    // Coarse lattice of ball queries, bilinearly interpolated per sample;
    // only nodes adjacent to an active sample are evaluated.
    Vec2 lo = sub_pos[0], hi = sub_pos[0];
    for (const Vec2& q : sub_pos) {
        lo.x = std::min(lo.x, q.x); lo.y = std::min(lo.y, q.y);
        hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
    }
    for (const Vec2& q : leader_pos) {
        lo.x = std::min(lo.x, q.x); lo.y = std::min(lo.y, q.y);
        hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
    }
    lo -= Vec2{0.5, 0.5};
    hi += Vec2{0.5, 0.5};
    // node spacing tied to the expected ball radius: the radius field is
    // smooth at that scale, so finer lattices only add cost
    const double total_mass = ens.total_mass + swarm.mass();
    const double est_r = std::sqrt(std::max(
        1e-12, (hi.x - lo.x) * (hi.y - lo.y) * need / (std::max(total_mass, need) * 3.14159)));
    const double spacing = est_r / 2.5;
    const int nx = std::clamp(static_cast<int>((hi.x - lo.x) / spacing) + 2, 2, opt.grid_nx);
    const int ny = std::clamp(static_cast<int>((hi.y - lo.y) / spacing) + 2, 2, opt.grid_ny);
    const double hx = (hi.x - lo.x) / (nx - 1);
    const double hy = (hi.y - lo.y) / (ny - 1);

    std::vector<char> needed(static_cast<size_t>(nx) * ny, 0);
    for (int id : active_ids) {
        const Vec2 q = ens.samples[id].position;
        double fx = std::clamp((q.x - lo.x) / hx, 0.0, static_cast<double>(nx - 1));
        double fy = std::clamp((q.y - lo.y) / hy, 0.0, static_cast<double>(ny - 1));
        int ix = std::min(nx - 2, static_cast<int>(fx));
        int iy = std::min(ny - 2, static_cast<int>(fy));
        needed[static_cast<size_t>(iy) * nx + ix] = 1;
        needed[static_cast<size_t>(iy) * nx + ix + 1] = 1;
        needed[static_cast<size_t>(iy + 1) * nx + ix] = 1;
        needed[static_cast<size_t>(iy + 1) * nx + ix + 1] = 1;
    }

    RingBallSolver solver(sub_pos, point_mass, leader_pos, need);
    std::vector<double> node_radius(static_cast<size_t>(nx) * ny, 0.0);
    std::vector<double> node_nstar(static_cast<size_t>(nx) * ny, 1.0);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const size_t at = static_cast<size_t>(iy) * nx + ix;
            if (!needed[at]) continue;
            MassBallResult b = solver.query({lo.x + ix * hx, lo.y + iy * hy});
            node_radius[at] = std::sqrt(b.radius_sq);
            node_nstar[at] = b.mass;
        }
    }

    for (int id : active_ids) {
        const Vec2 q = ens.samples[id].position;
        double fx = std::clamp((q.x - lo.x) / hx, 0.0, static_cast<double>(nx - 1));
        double fy = std::clamp((q.y - lo.y) / hy, 0.0, static_cast<double>(ny - 1));
        int ix = std::min(nx - 2, static_cast<int>(fx));
        int iy = std::min(ny - 2, static_cast<int>(fy));
        double ax = fx - ix, ay = fy - iy;
        auto lerp = [&](const std::vector<double>& v) {
            const size_t r0 = static_cast<size_t>(iy) * nx + ix;
            const size_t r1 = static_cast<size_t>(iy + 1) * nx + ix;
            double b0 = v[r0] * (1.0 - ax) + v[r0 + 1] * ax;
            double b1 = v[r1] * (1.0 - ax) + v[r1 + 1] * ax;
            return b0 * (1.0 - ay) + b1 * ay;
        };
        double rad = lerp(node_radius);
        ctx.radius_sq[id] = rad * rad;
        ctx.n_star[id] = std::max(1.0, lerp(node_nstar));
    }
    return ctx;
}

VelocityPair binary_follower_interaction(const SamplePoint& sp, const SamplePoint& sq,
                                         const Vec2& xi_p, const Vec2& xi_q,
                                         double ball_p_radius_sq, double ball_p_n_star,
                                         double ball_q_radius_sq, double ball_q_n_star,
                                         const KineticScaling& sc, double mass_f,
                                         const ModelParams& p, const Scenario& scen) {
    const double theta_p = visibility_indicator(sp.position, scen);
    const double theta_q = visibility_indicator(sq.position, scen);

    Vec2 kick_p = theta_p * p.c_z * xi_p + propulsion_drift(sp.position, sp.velocity, p, scen) +
                  mass_f * follower_interaction(sp.position, sp.velocity, sq.position,
                                                sq.velocity, ball_p_radius_sq, ball_p_n_star,
                                                p, scen);
    Vec2 kick_q = theta_q * p.c_z * xi_q + propulsion_drift(sq.position, sq.velocity, p, scen) +
                  mass_f * follower_interaction(sq.position, sq.velocity, sp.position,
                                                sp.velocity, ball_q_radius_sq, ball_q_n_star,
                                                p, scen);
    return {sp.velocity + sc.eta_f * kick_p, sq.velocity + sc.eta_f * kick_q};
}

Vec2 binary_leader_interaction(const SamplePoint& sp, const LeaderState& leader,
                               double ball_radius_sq, double ball_n_star,
                               const KineticScaling& sc, double mass_l,
                               const ModelParams& p, const Scenario& scen) {
    Vec2 h = follower_interaction(sp.position, sp.velocity, leader.position, leader.velocity,
                                  ball_radius_sq, ball_n_star, p, scen);
    return sp.velocity + sc.eta_l * mass_l * h;
}

KineticStepResult kinetic_step(ParticleEnsemble& ens, LeaderSwarm& swarm,
                               const std::vector<Vec2>& controls, double dt, long step,
                               const KineticScaling& sc, const ModelParams& p,
                               const Scenario& scen, const RandomSource& rng,
                               const KineticOptions& opt, BallContext* ctx_out) {
    KineticStepResult res;
    const int n = static_cast<int>(ens.samples.size());
    const int nl = static_cast<int>(swarm.leaders.size());
    const double mass_f = ens.total_mass;
    const double mass_l = swarm.mass();
    const double prob = dt / sc.epsilon;  // = dt*lambda*mass under the scaling
    const double varsigma = std::sqrt(sc.varsigma_sq);
    const std::uint64_t ustep = static_cast<std::uint64_t>(step);

    std::vector<int> active_ids;
    active_ids.reserve(n);
    for (int i = 0; i < n; ++i)
        if (ens.samples[i].active) active_ids.push_back(i);
    const int na = static_cast<int>(active_ids.size());

    // Step-start snapshot; every interaction reads it.
    std::vector<Vec2> pos0(n), vel0(n);
    for (int i = 0; i < n; ++i) {
        pos0[i] = ens.samples[i].position;
        vel0[i] = ens.samples[i].velocity;
    }

    BallContext ctx = build_ball_context(ens, swarm, p, opt);

    // Leader velocities: exact quadrature of the repulsion kernel against the
    // full active ensemble, plus leader-leader repulsion and the control.
    std::vector<Vec2> w(nl, Vec2{0.0, 0.0});
    for (int k = 0; k < nl; ++k) {
        if (swarm.leaders[k].evacuated) continue;
        Vec2 wk = controls[k];
        const Vec2 y = swarm.leaders[k].position;
        for (int id : active_ids) wk += ens.particle_weight * leader_repulsion(y, pos0[id], p);
        for (const auto& other : swarm.leaders)
            if (!other.evacuated) wk += leader_repulsion(y, other.position, p);
        w[k] = wk;
    }

    std::vector<Vec2> dv(n, Vec2{0.0, 0.0});

    auto sample_at = [&](int id) {
        return SamplePoint{pos0[id], vel0[id], true};
    };

    if (opt.deterministic) {
        // Exhaustive means with interaction probability one; the noise kick
        // is dropped (its mean is zero).
        for (int a = 0; a < na; ++a) {
            const int id = active_ids[a];
            Vec2 mean_h{0.0, 0.0};
            for (int b = 0; b < na; ++b) {
                const int qid = active_ids[b];
                mean_h += follower_interaction(pos0[id], vel0[id], pos0[qid], vel0[qid],
                                               ctx.radius_sq[id], ctx.n_star[id], p, scen);
            }
            mean_h *= 1.0 / std::max(1, na);
            Vec2 kick = propulsion_drift(pos0[id], vel0[id], p, scen) + mass_f * mean_h;
            dv[id] += sc.eta_f * kick;
            res.pair_interactions++;

            int nal = 0;
            Vec2 mean_l{0.0, 0.0};
            for (int k = 0; k < nl; ++k) {
                if (swarm.leaders[k].evacuated) continue;
                mean_l += follower_interaction(pos0[id], vel0[id],
                                               swarm.leaders[k].position, w[k],
                                               ctx.radius_sq[id], ctx.n_star[id], p, scen);
                nal++;
            }
            if (nal > 0) {
                dv[id] += sc.eta_l * mass_l * (mean_l / nal);
                res.leader_interactions++;
            }
        }
    } else {
        // Disjoint random pairing (random permutation, adjacent pairs).
        std::vector<int> perm = active_ids;
        RandomSource shuffle_rng = rng.at(rng_tag::pair_shuffle, ustep);
        for (int i = na - 1; i > 0; --i)
            std::swap(perm[i], perm[shuffle_rng.uniform_int(i + 1)]);

        const int npairs = na / 2;
        for (int pi = 0; pi < npairs; ++pi) {
            RandomSource pr = rng.at(rng_tag::pair_noise, ustep, static_cast<std::uint64_t>(pi));
            if (pr.uniform01() >= prob) continue;
            const int ip = perm[2 * pi];
            const int iq = perm[2 * pi + 1];
            Vec2 xi_p = truncate_noise(pr.gaussian_pair(varsigma), varsigma);
            Vec2 xi_q = truncate_noise(pr.gaussian_pair(varsigma), varsigma);
            VelocityPair vp = binary_follower_interaction(
                sample_at(ip), sample_at(iq), xi_p, xi_q, ctx.radius_sq[ip], ctx.n_star[ip],
                ctx.radius_sq[iq], ctx.n_star[iq], sc, mass_f, p, scen);
            dv[ip] += vp.v_p - vel0[ip];
            dv[iq] += vp.v_q - vel0[iq];
            res.pair_interactions++;
        }

        std::vector<int> active_leaders;
        for (int k = 0; k < nl; ++k)
            if (!swarm.leaders[k].evacuated) active_leaders.push_back(k);
        if (!active_leaders.empty()) {
            const int nal = static_cast<int>(active_leaders.size());
            for (int a = 0; a < na; ++a) {
                const int id = active_ids[a];
                RandomSource lr = rng.at(rng_tag::leader_pick, ustep,
                                         static_cast<std::uint64_t>(id));
                if (lr.uniform01() >= prob) continue;
                const int k = active_leaders[lr.uniform_int(nal)];
                Vec2 v2 = binary_leader_interaction(sample_at(id), {swarm.leaders[k].position, w[k]},
                                                    ctx.radius_sq[id], ctx.n_star[id], sc,
                                                    mass_l, p, scen);
                dv[id] += v2 - vel0[id];
                res.leader_interactions++;
            }
        }
    }

    // Transport with the step-start velocity, then walls, then the exit.
    for (int id : active_ids) {
        Vec2 v_new = vel0[id] + dv[id];
        cap_velocity(v_new, p.v_max);
        Vec2 x_new = pos0[id] + dt * vel0[id];
        resolve_walls(pos0[id], x_new, v_new, scen.obstacles);
        ens.samples[id].position = x_new;
        ens.samples[id].velocity = v_new;
    }

    for (int k = 0; k < nl; ++k) {
        if (swarm.leaders[k].evacuated) continue;
        const Vec2 y_old = swarm.leaders[k].position;
        Vec2 y_new = y_old + dt * w[k];
        Vec2 w_new = w[k];
        resolve_walls(y_old, y_new, w_new, scen.obstacles);
        swarm.leaders[k].position = y_new;
        swarm.leaders[k].velocity = w_new;
        if (scen.exit.evacuated(y_old, y_new)) {
            swarm.leaders[k].evacuated = true;
            swarm.leaders[k].velocity = {0.0, 0.0};
        }
    }

    for (int id : active_ids) {
        if (scen.exit.evacuated(pos0[id], ens.samples[id].position)) ens.deactivate(id);
    }
    ens.total_mass = ens.particle_weight * ens.active_count();

    if (ctx_out) *ctx_out = std::move(ctx);
    return res;
}

}  // namespace crowd
