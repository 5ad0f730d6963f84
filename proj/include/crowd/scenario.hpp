#ifndef CROWD_SCENARIO_HPP
#define CROWD_SCENARIO_HPP

#include <optional>
#include <vector>

#include "crowd/vec2.hpp"

namespace crowd {

// Region from which the target is visible.  Disk membership is open
// (|x - c| < radius), matching the usual strict-inequality definition.
struct VisibilityRegion {
    enum class Kind { Everywhere, Nowhere, Disk, HalfPlane };
    Kind kind = Kind::Everywhere;
    Vec2 center{};   // disk center / half-plane anchor
    Vec2 normal{};   // half-plane inward normal
    double radius = 0.0;

    bool contains(const Vec2& x) const {
        switch (kind) {
            case Kind::Everywhere: return true;
            case Kind::Nowhere: return false;
            case Kind::Disk: return dist_sq(x, center) < radius * radius;
            case Kind::HalfPlane: return (x - center).dot(normal) >= 0.0;
        }
        return false;
    }
    bool empty() const { return kind == Kind::Nowhere; }
};

struct Wall {
    Vec2 a{};
    Vec2 b{};
    double thickness = 0.1;
};

// Segment-segment intersection; returns the parameter t in [0,1] along
// p0->p1 of the first hit, if any.
std::optional<double> segment_intersection(const Vec2& p0, const Vec2& p1,
                                           const Vec2& a, const Vec2& b);

struct ExitPredicate {
    enum class Kind { None, PointCapture, SegmentCrossing };
    Kind kind = Kind::PointCapture;
    Vec2 point{};
    double capture_radius = 0.25;
    Vec2 a{};
    Vec2 b{};

    bool evacuated(const Vec2& old_pos, const Vec2& new_pos) const {
        switch (kind) {
            case Kind::None: return false;
            case Kind::PointCapture:
                return dist_sq(new_pos, point) <= capture_radius * capture_radius;
            case Kind::SegmentCrossing:
                return segment_intersection(old_pos, new_pos, a, b).has_value();
        }
        return false;
    }
};

struct SpawnSpec {
    Vec2 lo{};
    Vec2 hi{};
    enum class VelocityRule { Zero, RandomDirection };  // random: speed s, uniform heading
    VelocityRule velocity = VelocityRule::Zero;
};

struct Scenario {
    Vec2 target{};                 // exit point x_tau
    VisibilityRegion visibility{}; // Sigma
    std::vector<Wall> obstacles{};
    ExitPredicate exit{};
    SpawnSpec spawn{};
    int horizon_steps = 2000;
};

// Indicator of "target not visible": 1 outside Sigma, 0 inside.
inline double visibility_indicator(const Vec2& x, const Scenario& s) {
    return s.visibility.contains(x) ? 0.0 : 1.0;
}

}  // namespace crowd

#endif
