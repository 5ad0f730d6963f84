#ifndef CROWD_VEC2_HPP
#define CROWD_VEC2_HPP

#include <cmath>

namespace crowd {

// Planar vector; the whole artifact is d=2.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm_sq()); }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    // Unit vector, or zero when the argument is (numerically) zero.
    Vec2 unit_or_zero() const {
        double n = norm();
        if (n == 0.0) return {0.0, 0.0};
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dist_sq(const Vec2& a, const Vec2& b) { return (a - b).norm_sq(); }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace crowd

#endif
