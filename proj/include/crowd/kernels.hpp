#ifndef CROWD_KERNELS_HPP
#define CROWD_KERNELS_HPP

#include <span>
#include <vector>

#include "crowd/params.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"
#include "crowd/vec2.hpp"

namespace crowd {

// Metrical repulsion kernel R_{gamma,r}: exp(-|x'-x|^gamma) * (x'-x)/|x'-x|
// on the closed support 0 < |x'-x| <= r, zero elsewhere (including x'=x).
// Magnitude never exceeds 1.
Vec2 repulsion_kernel(const Vec2& x, const Vec2& x_other, double gamma, double r);

struct BallResult {
    double radius = 0.0;
    std::vector<int> members;  // closed ball, ties included
    int n_star = 0;            // |members|, >= n_topo when enough agents exist
    bool degenerate = false;   // n_topo exceeded the population
};

// Minimal ball centred at x holding at least n_topo of the given positions.
// The querying agent's own entry is expected to be in the list (distance 0).
BallResult topological_ball(const Vec2& x, std::span<const Vec2> positions, int n_topo);

struct MassBallResult {
    double radius_sq = 0.0;
    double mass = 0.0;        // mass inside the closed ball
    bool degenerate = false;
};

// Weighted quantile over squared distances: smallest radius whose closed
// ball holds need_mass, where every entry of d2_pts carries point_mass and
// every entry of d2_units carries mass 1.  d2_pts is used as scratch;
// d2_units must be sorted ascending.
MassBallResult weighted_distance_quantile(std::vector<double>& d2_pts, double point_mass,
                                          const std::vector<double>& d2_units,
                                          double need_mass);

// Weighted generalisation used by the kinetic solver: minimal ball holding
// at least need_mass, where each of pts carries point_mass and each of
// unit_pts carries mass 1.  With point_mass = 1 and need_mass = n_topo this
// reduces exactly to topological_ball.
MassBallResult mass_ball(const Vec2& x, std::span<const Vec2> pts, double point_mass,
                         std::span<const Vec2> unit_pts, double need_mass);

// Self-propulsion A(x,v): exploration relaxation toward the noise draw z
// outside Sigma, target pursuit inside, plus speed relaxation toward s.
// The target direction is defined as zero at x = target.
Vec2 self_propulsion(const Vec2& x, const Vec2& v, const Vec2& z,
                     const ModelParams& p, const Scenario& sc);

// Deterministic part S(x,v) of the self-propulsion (the noise kick removed).
Vec2 propulsion_drift(const Vec2& x, const Vec2& v,
                      const ModelParams& p, const Scenario& sc);

// Follower-follower / follower-leader interaction H (the two coincide):
// repulsion plus, outside Sigma, topological alignment normalised by n_star.
// ball_radius_sq / n_star describe the precomputed ball at x.
Vec2 follower_interaction(const Vec2& x, const Vec2& v,
                          const Vec2& x_other, const Vec2& v_other,
                          double ball_radius_sq, double n_star,
                          const ModelParams& p, const Scenario& sc);

// Leader kernel K = -C_r^l R_{zeta,r}; a velocity, not an acceleration.
inline Vec2 leader_repulsion(const Vec2& y, const Vec2& other, const ModelParams& p) {
    return -p.c_r_l * repulsion_kernel(y, other, p.zeta, p.r);
}

}  // namespace crowd

#endif
