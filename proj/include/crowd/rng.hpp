#ifndef CROWD_RNG_HPP
#define CROWD_RNG_HPP

#include <cstdint>
#include <cmath>

#include "crowd/vec2.hpp"

namespace crowd {

// Splittable counter-style generator (splitmix64 core).
//
// Reproducibility contract: identical seed + identical call sequence gives
// bit-identical draws.  Streams are derived, never shared: each logical
// owner (agent, pair, replicate) gets its own source via at(...), so results
// do not depend on the order in which owners are processed.
class RandomSource {
public:
    RandomSource() : state_(0) {}
    explicit RandomSource(std::uint64_t seed) : state_(mix(seed ^ 0x8f1bbcdcbfa53e0bULL)) {}

    // Derived independent stream; pure, the parent is not advanced.
    RandomSource at(std::uint64_t k0) const {
        RandomSource r;
        r.state_ = mix(state_ ^ mix(k0 + 0x632be59bd9b4e019ULL));
        return r;
    }
    RandomSource at(std::uint64_t k0, std::uint64_t k1) const { return at(k0).at(k1); }
    RandomSource at(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) const {
        return at(k0).at(k1).at(k2);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0,1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in {0,...,n-1}; n must be positive.
    int uniform_int(int n) {
        int k = static_cast<int>(uniform01() * n);
        return k >= n ? n - 1 : k;
    }

    // Pair of independent N(0, sigma^2) draws (Box-Muller); used for the
    // planar noise vectors z and xi.
    Vec2 gaussian_pair(double sigma) {
        double u1 = 1.0 - uniform01();  // (0,1], keeps the log finite
        double u2 = uniform01();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        return {sigma * rad * std::cos(ang), sigma * rad * std::sin(ang)};
    }

    std::uint64_t state() const { return state_; }

private:
    static std::uint64_t mix(std::uint64_t h) {
        h += 0x9e3779b97f4a7c15ULL;
        h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
        h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
        return h ^ (h >> 31);
    }

    std::uint64_t state_;
};

// Stream tags; keep stable, they are part of the reproducibility contract.
namespace rng_tag {
inline constexpr std::uint64_t spawn = 1;
inline constexpr std::uint64_t micro_noise = 2;
inline constexpr std::uint64_t pair_shuffle = 3;
inline constexpr std::uint64_t pair_noise = 4;
inline constexpr std::uint64_t leader_pick = 5;
inline constexpr std::uint64_t leader_policy = 6;
inline constexpr std::uint64_t compass = 7;
inline constexpr std::uint64_t replicate = 8;
}  // namespace rng_tag

}  // namespace crowd

#endif
