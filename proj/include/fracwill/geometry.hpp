#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracwill {

/// Thrown when an input violates a geometric precondition (degenerate
/// polyline, non-embedded curve at quadrature scale, ...).
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown for out-of-range parameters (s outside (0,1), bad window, ...).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a constraint set is violated (radius of curvature below
/// the floor, containment failure, projection not converging).
struct constraint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 b) const { return {x + b.x, y + b.y}; }
    Vec2 operator-(Vec2 b) const { return {x - b.x, y - b.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator/(double c) const { return {x / c, y / c}; }
    Vec2& operator+=(Vec2 b) { x += b.x; y += b.y; return *this; }
    Vec2& operator-=(Vec2 b) { x -= b.x; y -= b.y; return *this; }

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }

    /// Rotation by -pi/2: (x,y) -> (y,-x).
    Vec2 perp() const { return {y, -x}; }

    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3-d cross product.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Counterclockwise rotation by theta.
inline Vec2 rotate(Vec2 v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Twice the signed area of a closed polygon (positive = counterclockwise).
inline double signed_area2(const std::vector<Vec2>& pts) {
    double a = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = pts[i], q = pts[(i + 1) % n];
        a += cross(p, q);
    }
    return a;
}

inline double polyline_length(const std::vector<Vec2>& pts, bool closed) {
    double len = 0.0;
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) len += distance(pts[i], pts[i + 1]);
    if (closed) len += distance(pts[n - 1], pts[0]);
    return len;
}

/// Distance from point p to segment [a,b].
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double L2 = ab.norm2();
    if (L2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / L2;
    t = std::fmin(1.0, std::fmax(0.0, t));
    return distance(p, a + t * ab);
}

/// Convex hull of a point set (Andrew monotone chain), counterclockwise,
/// strictly convex vertices only.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace fracwill
