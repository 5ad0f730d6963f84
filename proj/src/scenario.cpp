#include "crowd/scenario.hpp"

namespace crowd {

std::optional<double> segment_intersection(const Vec2& p0, const Vec2& p1,
                                           const Vec2& a, const Vec2& b) {
    const Vec2 d = p1 - p0;
    const Vec2 e = b - a;
    const double denom = d.cross(e);
    if (denom == 0.0) return std::nullopt;  // parallel or degenerate
    const Vec2 w = a - p0;
    const double t = w.cross(e) / denom;
    const double s = w.cross(d) / denom;
    if (t < 0.0 || t > 1.0 || s < 0.0 || s > 1.0) return std::nullopt;
    return t;
}

}  // namespace crowd
