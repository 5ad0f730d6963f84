#include "crowd/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace crowd {

ParticleEnsemble make_ensemble(int n_s, double total_mass, const SpawnSpec& spawn,
                               const RandomSource& rng) {
    ParticleEnsemble ens;
    ens.n_s = n_s;
    ens.total_mass = total_mass;
    ens.particle_weight = total_mass / n_s;
    ens.samples.resize(n_s);
    for (int i = 0; i < n_s; ++i) {
        RandomSource r = rng.at(rng_tag::spawn, static_cast<std::uint64_t>(i));
        ens.samples[i].position = {r.uniform(spawn.lo.x, spawn.hi.x),
                                   r.uniform(spawn.lo.y, spawn.hi.y)};
        ens.samples[i].velocity = {0.0, 0.0};
        ens.samples[i].active = true;
    }
    return ens;
}

DensityGrid density_histogram(const ParticleEnsemble& ens, Vec2 lo, Vec2 hi,
                              int nx, int ny) {
    DensityGrid g;
    g.lo = lo;
    g.hi = hi;
    g.nx = nx;
    g.ny = ny;
    g.mass.assign(static_cast<size_t>(nx) * ny, 0.0);
    const double sx = nx / (hi.x - lo.x);
    const double sy = ny / (hi.y - lo.y);
    for (const auto& s : ens.samples) {
        if (!s.active) continue;
        if (s.position.x < lo.x || s.position.x > hi.x ||
            s.position.y < lo.y || s.position.y > hi.y) {
            g.outside_mass += ens.particle_weight;
            continue;
        }
        int ix = std::min(nx - 1, static_cast<int>((s.position.x - lo.x) * sx));
        int iy = std::min(ny - 1, static_cast<int>((s.position.y - lo.y) * sy));
        g.at(ix, iy) += ens.particle_weight;
    }
    return g;
}

}  // namespace crowd
