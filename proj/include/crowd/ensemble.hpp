#ifndef CROWD_ENSEMBLE_HPP
#define CROWD_ENSEMBLE_HPP

#include <vector>

#include "crowd/rng.hpp"
#include "crowd/scenario.hpp"
#include "crowd/state.hpp"
#include "crowd/vec2.hpp"

namespace crowd {

struct SamplePoint {
    Vec2 position{};
    Vec2 velocity{};
    bool active = true;
};

// Weighted sample representation of the follower density.  Each sample
// carries mass particle_weight = initial_mass / n_s; deactivating a sample
// removes its mass.  mass() is exact by construction: it is only ever
// changed by deactivation.
struct ParticleEnsemble {
    std::vector<SamplePoint> samples;
    double particle_weight = 0.0;
    int n_s = 0;
    double total_mass = 0.0;

    int active_count() const {
        int n = 0;
        for (const auto& s : samples) n += s.active ? 1 : 0;
        return n;
    }
    void deactivate(int i) {
        if (samples[i].active) {
            samples[i].active = false;
            total_mass -= particle_weight;
        }
    }
};

// Microscopic leaders coupled to the kinetic density; each is a unit Dirac
// mass, so the swarm mass equals the leader count.
struct LeaderSwarm {
    std::vector<LeaderState> leaders;
    double mass() const {
        double m = 0.0;
        for (const auto& l : leaders) m += l.evacuated ? 0.0 : 1.0;
        return m;
    }
};

// Grazing-scaling constants: interaction strengths scale with epsilon,
// frequencies with 1/(epsilon * mass), noise variance with 1/epsilon.
struct KineticScaling {
    double epsilon = 0.02;
    double eta_f = 0.02;
    double eta_l = 0.02;
    double lambda_f = 0.0;
    double lambda_l = 0.0;
    double varsigma_sq = 0.0;

    static KineticScaling make(double epsilon, double mass_f, double mass_l,
                               double sigma_sq) {
        KineticScaling s;
        s.epsilon = epsilon;
        s.eta_f = epsilon;
        s.eta_l = epsilon;
        s.lambda_f = mass_f > 0.0 ? 1.0 / (epsilon * mass_f) : 0.0;
        s.lambda_l = mass_l > 0.0 ? 1.0 / (epsilon * mass_l) : 0.0;
        s.varsigma_sq = sigma_sq / epsilon;
        return s;
    }
};

// Uniform ensemble over the spawn box, zero initial velocity, total mass
// equal to the follower count it represents.
ParticleEnsemble make_ensemble(int n_s, double total_mass, const SpawnSpec& spawn,
                               const RandomSource& rng);

struct DensityGrid {
    Vec2 lo{};
    Vec2 hi{};
    int nx = 0;
    int ny = 0;
    std::vector<double> mass;   // row-major, ny rows of nx
    double outside_mass = 0.0;  // mass of active samples falling off-grid
    double time = 0.0;

    double& at(int ix, int iy) { return mass[static_cast<size_t>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return mass[static_cast<size_t>(iy) * nx + ix]; }
};

DensityGrid density_histogram(const ParticleEnsemble& ens, Vec2 lo, Vec2 hi,
                              int nx, int ny);

}  // namespace crowd

#endif
