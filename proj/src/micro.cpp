#include "crowd/micro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowd {

namespace {

void cap_velocity(Vec2& v, double v_max) {
    double n2 = v.norm_sq();
    if (n2 > v_max * v_max) v *= v_max / std::sqrt(n2);
}

}  // namespace

Vec2 leader_velocity(int k, const CrowdState& state, const Vec2& u_k,
                     const ModelParams& p) {
    if (state.leaders[k].evacuated) return {0.0, 0.0};
    const Vec2 y = state.leaders[k].position;
    Vec2 w = u_k;
    for (const auto& f : state.followers) {
        if (f.evacuated) continue;
        w += leader_repulsion(y, f.position, p);
    }
    for (const auto& l : state.leaders) {
        if (l.evacuated) continue;
        w += leader_repulsion(y, l.position, p);  // self term vanishes
    }
    return w;
}

void resolve_walls(const Vec2& old_pos, Vec2& pos, Vec2& vel,
                   const std::vector<Wall>& obstacles) {
    if (obstacles.empty()) return;
    for (int pass = 0; pass < 3; ++pass) {
        double best_t = 2.0;
        const Wall* hit = nullptr;
        for (const auto& w : obstacles) {
            auto t = segment_intersection(old_pos, pos, w.a, w.b);
            if (t && *t < best_t) {
                best_t = *t;
                hit = &w;
            }
        }
        if (!hit) return;
        const Vec2 d = pos - old_pos;
        const Vec2 tang = (hit->b - hit->a).unit_or_zero();
        Vec2 n{-tang.y, tang.x};
        if (n.dot(d) > 0.0) n = -n;  // orient toward the incoming side
        const Vec2 contact = old_pos + d * best_t;
        pos = contact + n * (1e-3 + 0.5 * hit->thickness);
        const double vn = vel.dot(n);
        if (vn < 0.0) vel -= n * vn;
    }
}

CrowdState hard_sphere_filter(const CrowdState& old_state, const CrowdState& proposed,
                              double diameter) {
    if (diameter <= 0.0) return proposed;
    CrowdState out = proposed;
    const double d2 = diameter * diameter;
    const int n = static_cast<int>(proposed.followers.size());
    for (int i = 0; i < n; ++i) {
        if (proposed.followers[i].evacuated) continue;
        const Vec2 pi = proposed.followers[i].position;
        bool freeze = false;
        for (int j = 0; j < n && !freeze; ++j) {
            if (j == i || proposed.followers[j].evacuated) continue;
            if (dist_sq(pi, proposed.followers[j].position) < d2 ||
                dist_sq(pi, old_state.followers[j].position) < d2)
                freeze = true;
        }
        if (freeze) out.followers[i].position = old_state.followers[i].position;
    }
    return out;
}

CrowdState micro_step(const CrowdState& state, const std::vector<Vec2>& controls,
                      const ModelParams& p, const Scenario& sc,
                      const RandomSource& rng, const MicroOptions& opt,
                      StepDebug* dbg) {
    const int nl = static_cast<int>(state.leaders.size());
    if (static_cast<int>(controls.size()) != nl)
        throw std::invalid_argument("micro_step: one control per leader required");

    const int nf = static_cast<int>(state.followers.size());
    const double sigma = std::sqrt(p.sigma_sq);

    // Step-start snapshot of every interaction partner.
    std::vector<Vec2> pos;       // active followers then leaders
    std::vector<Vec2> vel;
    std::vector<int> follower_of;
    pos.reserve(nf + nl);
    vel.reserve(nf + nl);
    for (int i = 0; i < nf; ++i) {
        if (state.followers[i].evacuated) continue;
        pos.push_back(state.followers[i].position);
        vel.push_back(state.followers[i].velocity);
        follower_of.push_back(i);
    }
    const int na = static_cast<int>(pos.size());

    std::vector<Vec2> w(nl);
    for (int k = 0; k < nl; ++k) w[k] = leader_velocity(k, state, controls[k], p);
    for (int k = 0; k < nl; ++k) {
        if (state.leaders[k].evacuated) continue;
        pos.push_back(state.leaders[k].position);
        vel.push_back(w[k]);
    }
    const int ntot = static_cast<int>(pos.size());

    CrowdState next = state;
    next.step = state.step + 1;
    next.time = next.step * p.dt;

    std::vector<double> d2(ntot);
    std::vector<double> scratch;

    for (int a = 0; a < na; ++a) {
        const int i = follower_of[a];
        const Vec2 x = pos[a];
        const Vec2 v = vel[a];
        const double theta = visibility_indicator(x, sc);

        Vec2 force{0.0, 0.0};
        for (int b = 0; b < ntot; ++b) {
            d2[b] = dist_sq(x, pos[b]);
            if (d2[b] > 0.0 && d2[b] <= p.r * p.r) {
                double n = std::sqrt(d2[b]);
                double mag = p.c_r_f * std::exp(-std::pow(n, p.gamma)) / n;
                force -= (pos[b] - x) * mag;
            }
        }

        if (theta > 0.0 && p.c_a > 0.0) {
            double radius_sq;
            int n_star;
            if (p.n_topo > ntot) {
                radius_sq = *std::max_element(d2.begin(), d2.end());
                n_star = ntot;
                if (dbg) dbg->degenerate_balls++;
            } else {
                scratch = d2;
                std::nth_element(scratch.begin(), scratch.begin() + (p.n_topo - 1), scratch.end());
                radius_sq = scratch[p.n_topo - 1];
                n_star = 0;
                for (int b = 0; b < ntot; ++b) n_star += (d2[b] <= radius_sq) ? 1 : 0;
            }
            Vec2 align{0.0, 0.0};
            for (int b = 0; b < ntot; ++b)
                if (d2[b] <= radius_sq) align += vel[b] - v;
            force += align * (theta * p.c_a / n_star);
        }

        Vec2 z{0.0, 0.0};
        if (theta > 0.0)
            z = rng.at(rng_tag::micro_noise, static_cast<std::uint64_t>(state.step),
                       static_cast<std::uint64_t>(i))
                    .gaussian_pair(sigma);
        force += self_propulsion(x, v, z, p, sc);

        Vec2 v_new = v + p.dt * force;
        cap_velocity(v_new, p.v_max);
        Vec2 x_new = x + p.dt * v;  // position update uses the pre-update velocity

        resolve_walls(x, x_new, v_new, sc.obstacles);
        next.followers[i].position = x_new;
        next.followers[i].velocity = v_new;
    }

    for (int k = 0; k < nl; ++k) {
        if (state.leaders[k].evacuated) continue;
        Vec2 y_new = state.leaders[k].position + p.dt * w[k];
        Vec2 w_new = w[k];
        resolve_walls(state.leaders[k].position, y_new, w_new, sc.obstacles);
        next.leaders[k].position = y_new;
        next.leaders[k].velocity = w_new;
    }

    if (opt.hard_sphere) next = hard_sphere_filter(state, next, opt.diameter);

    for (int i = 0; i < nf; ++i) {
        if (next.followers[i].evacuated) continue;
        if (sc.exit.evacuated(state.followers[i].position, next.followers[i].position))
            next.followers[i].evacuated = true;
    }
    for (int k = 0; k < nl; ++k) {
        if (next.leaders[k].evacuated) continue;
        if (sc.exit.evacuated(state.leaders[k].position, next.leaders[k].position)) {
            next.leaders[k].evacuated = true;
            next.leaders[k].velocity = {0.0, 0.0};
        }
    }

    return next;
}

}  // namespace crowd
