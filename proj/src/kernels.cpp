#include "crowd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace crowd {

Vec2 repulsion_kernel(const Vec2& x, const Vec2& x_other, double gamma, double r) {
    Vec2 d = x_other - x;
    double n2 = d.norm_sq();
    if (n2 == 0.0 || n2 > r * r) return {0.0, 0.0};
    double n = std::sqrt(n2);
    double mag = std::exp(-std::pow(n, gamma));
    return d * (mag / n);
}

BallResult topological_ball(const Vec2& x, std::span<const Vec2> positions, int n_topo) {
    BallResult out;
    const int n = static_cast<int>(positions.size());
    if (n == 0) return out;

    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) d2[i] = dist_sq(x, positions[i]);

    double radius_sq;
    if (n_topo > n) {
        radius_sq = *std::max_element(d2.begin(), d2.end());
        out.degenerate = true;
    } else {
        std::vector<double> scratch(d2);
        std::nth_element(scratch.begin(), scratch.begin() + (n_topo - 1), scratch.end());
        radius_sq = scratch[n_topo - 1];
    }

    out.radius = std::sqrt(radius_sq);
    for (int i = 0; i < n; ++i)
        if (d2[i] <= radius_sq) out.members.push_back(i);
    out.n_star = static_cast<int>(out.members.size());
    return out;
}

MassBallResult weighted_distance_quantile(std::vector<double>& d2_pts, double point_mass,
                                          const std::vector<double>& d2_units,
                                          double need_mass) {
    MassBallResult out;
    const int k = static_cast<int>(d2_pts.size());
    const int l = static_cast<int>(d2_units.size());
    if (k == 0 && l == 0) return out;

    const double total = point_mass * k + l;
    double radius_sq;
    if (need_mass >= total) {
        radius_sq = 0.0;
        for (double v : d2_pts) radius_sq = std::max(radius_sq, v);
        for (double v : d2_units) radius_sq = std::max(radius_sq, v);
        out.degenerate = true;
    } else {
        // For each possible count of unit points inside the ball, the
        // candidate radius is the larger of the binding unit distance and
        // the distance of the last weighted point still needed; the answer
        // is the smallest candidate.
        radius_sq = -1.0;
        for (int ell = 0; ell <= l; ++ell) {
            // once the binding unit distance alone reaches the incumbent, no
            // larger unit count can improve it
            if (ell > 0 && radius_sq >= 0.0 && d2_units[ell - 1] >= radius_sq) break;
            double need_sub = need_mass - ell;
            int n_sub = 0;
            if (need_sub > 0.0) {
                if (point_mass <= 0.0) continue;
                n_sub = static_cast<int>(std::ceil(need_sub / point_mass - 1e-12));
                if (n_sub > k) continue;
            }
            double cand = 0.0;
            if (n_sub > 0) {
                std::nth_element(d2_pts.begin(), d2_pts.begin() + (n_sub - 1), d2_pts.end());
                cand = d2_pts[n_sub - 1];
            }
            if (ell > 0) cand = std::max(cand, d2_units[ell - 1]);
            if (radius_sq < 0.0 || cand < radius_sq) radius_sq = cand;
        }
        if (radius_sq < 0.0) {  // no feasible candidate (point_mass = 0, too few units)
            radius_sq = 0.0;
            for (double v : d2_pts) radius_sq = std::max(radius_sq, v);
            for (double v : d2_units) radius_sq = std::max(radius_sq, v);
            out.degenerate = true;
        }
    }

    double mass = 0.0;
    for (double v : d2_pts) mass += (v <= radius_sq) ? point_mass : 0.0;
    for (double v : d2_units) mass += (v <= radius_sq) ? 1.0 : 0.0;
    out.radius_sq = radius_sq;
    out.mass = mass;
    return out;
}

MassBallResult mass_ball(const Vec2& x, std::span<const Vec2> pts, double point_mass,
                         std::span<const Vec2> unit_pts, double need_mass) {
    std::vector<double> d2(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) d2[i] = dist_sq(x, pts[i]);
    std::vector<double> u2(unit_pts.size());
    for (size_t j = 0; j < unit_pts.size(); ++j) u2[j] = dist_sq(x, unit_pts[j]);
    std::sort(u2.begin(), u2.end());
    return weighted_distance_quantile(d2, point_mass, u2, need_mass);
}

Vec2 self_propulsion(const Vec2& x, const Vec2& v, const Vec2& z,
                     const ModelParams& p, const Scenario& sc) {
    const double theta = visibility_indicator(x, sc);
    Vec2 a = p.c_s * (p.s_sq - v.norm_sq()) * v;
    if (theta > 0.0) {
        a += theta * p.c_z * (z - v);
    }
    if (theta < 1.0) {
        Vec2 dir = (sc.target - x).unit_or_zero();  // zero at the target itself
        a += (1.0 - theta) * p.c_tau * (dir - v);
    }
    return a;
}

Vec2 propulsion_drift(const Vec2& x, const Vec2& v,
                      const ModelParams& p, const Scenario& sc) {
    const double theta = visibility_indicator(x, sc);
    Vec2 a = p.c_s * (p.s_sq - v.norm_sq()) * v;
    a += theta * p.c_z * (-v);
    if (theta < 1.0) {
        Vec2 dir = (sc.target - x).unit_or_zero();
        a += (1.0 - theta) * p.c_tau * (dir - v);
    }
    return a;
}

Vec2 follower_interaction(const Vec2& x, const Vec2& v,
                          const Vec2& x_other, const Vec2& v_other,
                          double ball_radius_sq, double n_star,
                          const ModelParams& p, const Scenario& sc) {
    Vec2 h = -p.c_r_f * repulsion_kernel(x, x_other, p.gamma, p.r);
    const double theta = visibility_indicator(x, sc);
    if (theta > 0.0 && dist_sq(x, x_other) <= ball_radius_sq) {
        double denom = std::max(n_star, 1.0);
        h += theta * (p.c_a / denom) * (v_other - v);
    }
    return h;
}

}  // namespace crowd
