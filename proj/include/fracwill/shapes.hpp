#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fracwill/curve.hpp"
#include "fracwill/support_curve.hpp"

namespace fracwill {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Uniform double in [0,1) from the top 53 bits of the generator, so the
/// stream is identical on every standard library.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Counterclockwise circle, node 0 at (cx + r, cy).
inline ArcCurve circle_curve(int N, double radius = 1.0, Vec2 center = {0.0, 0.0}) {
    std::vector<Vec2> pts(N);
    for (int i = 0; i < N; ++i) {
        const double t = 2.0 * kPi * i / N;
        pts[i] = center + Vec2{radius * std::cos(t), radius * std::sin(t)};
    }
    return tangent_normal(resample_arclength(pts, N));
}

/// Counterclockwise ellipse with semi-axes (a, b), node 0 at (a, 0).
inline ArcCurve ellipse_curve(int N, double a, double b) {
    const int fine = std::max(16 * N, 8192);
    std::vector<Vec2> pts(fine);
    for (int i = 0; i < fine; ++i) {
        const double t = 2.0 * kPi * i / fine;
        pts[i] = {a * std::cos(t), b * std::sin(t)};
    }
    return make_arc_curve(pts, N);
}

/// Axis-aligned unit-ish square [0,side]^2, counterclockwise. Nodes are
/// offset half a spacing so no node lands on a corner. N must be a
/// multiple of 4.
inline ArcCurve square_curve(int N, double side = 1.0) {
    if (N % 4 != 0) throw parameter_error("square_curve: N must be a multiple of 4");
    const double L = 4.0 * side;
    const double delta = L / N;
    auto on_square = [&](double s) -> Vec2 {
        s = std::fmod(s, L);
        if (s < 0) s += L;
        const int edge = static_cast<int>(s / side);
        const double u = s - edge * side;
        switch (edge) {
            case 0: return {u, 0.0};
            case 1: return {side, u};
            case 2: return {side - u, side};
            default: return {0.0, side - u};
        }
    };
    ArcCurve c;
    c.closed = true;
    c.spacing = delta;
    c.nodes.resize(N);
    for (int i = 0; i < N; ++i) c.nodes[i] = on_square((i + 0.5) * delta);
    return tangent_normal(std::move(c));
}

/// Square with circular fillets of the given radius at the corners,
/// counterclockwise, resampled to N uniform arc nodes.
inline ArcCurve rounded_square_curve(int N, double side = 1.0, double fillet = 0.05) {
    const double r = fillet;
    const double flat = side - 2.0 * r;
    if (flat <= 0.0) throw parameter_error("rounded_square_curve: fillet too large");
    std::vector<Vec2> pts;
    const int arc_pts = std::max(16, 4 * N / 16);
    const int flat_pts = std::max(16, 4 * N / 8);
    auto add_flat = [&](Vec2 a, Vec2 b) {
        for (int i = 0; i < flat_pts; ++i)
            pts.push_back(a + (static_cast<double>(i) / flat_pts) * (b - a));
    };
    auto add_arc = [&](Vec2 center, double t0, double t1) {
        for (int i = 0; i < arc_pts; ++i) {
            const double t = t0 + (t1 - t0) * i / arc_pts;
            pts.push_back(center + Vec2{r * std::cos(t), r * std::sin(t)});
        }
    };
    add_flat({r, 0.0}, {side - r, 0.0});
    add_arc({side - r, r}, -kPi / 2, 0.0);
    add_flat({side, r}, {side, side - r});
    add_arc({side - r, side - r}, 0.0, kPi / 2);
    add_flat({side - r, side}, {r, side});
    add_arc({r, side - r}, kPi / 2, kPi);
    add_flat({0.0, side - r}, {0.0, r});
    add_arc({r, r}, kPi, 3 * kPi / 2);
    return make_arc_curve(pts, N);
}

/// Two unit-radius lobes joined by a thin neck of the given gap;
/// nonconvex, used for self-proximity tests.
inline ArcCurve dumbbell_curve(int N, double neck_gap = 0.01, double lobe_sep = 2.0) {
    const double y = neck_gap / 2.0;
    const double R = 1.0;
    const double cx = lobe_sep;
    // angle where the neck line y = +/-g/2 meets the lobe circle
    const double a = std::asin(y / R);
    std::vector<Vec2> pts;
    const int arc_pts = 512, neck_pts = 256;
    auto add_arc = [&](Vec2 center, double t0, double t1) {
        for (int i = 0; i < arc_pts; ++i) {
            const double t = t0 + (t1 - t0) * i / arc_pts;
            pts.push_back(center + Vec2{R * std::cos(t), R * std::sin(t)});
        }
    };
    auto add_line = [&](Vec2 p, Vec2 q) {
        for (int i = 0; i < neck_pts; ++i)
            pts.push_back(p + (static_cast<double>(i) / neck_pts) * (q - p));
    };
    // counterclockwise: right lobe, upper neck (right->left), left lobe, lower neck
    add_arc({cx, 0.0}, -(kPi - a), kPi - a);
    add_line({cx - R * std::cos(a), y}, {-cx + R * std::cos(a), y});
    add_arc({-cx, 0.0}, a, 2.0 * kPi - a);
    add_line({-cx + R * std::cos(a), -y}, {cx - R * std::cos(a), -y});
    return make_arc_curve(pts, N);
}

/// Five-pointed star polyline (nonconvex).
inline ArcCurve star_curve(int N, double r_outer = 1.0, double r_inner = 0.4) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 10; ++i) {
        const double r = (i % 2 == 0) ? r_outer : r_inner;
        const double t = kPi / 2 + 2.0 * kPi * i / 10.0;
        pts.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return make_arc_curve(pts, N);
}

/// Circle with a single inward dent of the given depth around angle pi.
inline ArcCurve dented_circle_curve(int N, double depth = 0.2, double width = 0.6) {
    const int fine = std::max(16 * N, 8192);
    std::vector<Vec2> pts(fine);
    for (int i = 0; i < fine; ++i) {
        const double t = 2.0 * kPi * i / fine;
        double r = 1.0;
        const double d = std::atan2(std::sin(t - kPi), std::cos(t - kPi));
        if (std::abs(d) < width) {
            const double u = d / width;
            r -= depth * 0.5 * (1.0 + std::cos(kPi * u));
        }
        pts[i] = {r * std::cos(t), r * std::sin(t)};
    }
    return make_arc_curve(pts, N);
}

/// Open straight segment along the x-axis.
inline ArcCurve segment_curve(int N, double length = 1.0) {
    ArcCurve c;
    c.closed = false;
    c.spacing = length / (N - 1);
    c.nodes.resize(N);
    for (int i = 0; i < N; ++i) c.nodes[i] = {i * c.spacing, 0.0};
    return tangent_normal(std::move(c));
}

/// Open wedge graph gamma(t) = (t, sign * |slope t|) about the corner at
/// the origin, parametrized by arc length left to right. sign = -1 gives
/// a cap (corner pointing up).
inline ArcCurve wedge_curve(int N, double slope = 1.0, double halfwidth = 1.0, double sign = -1.0) {
    std::vector<Vec2> pts;
    const int half = 4096;
    for (int i = -half; i <= half; ++i) {
        const double t = halfwidth * i / half;
        pts.push_back({t, sign * std::abs(slope * t)});
    }
    return make_arc_curve(pts, N, /*closed=*/false);
}

/// Random convex support curve: seeded coefficients with 1/k^2 decay at
/// the given amplitude, clipped to rho >= eps_kappa by construction of
/// the draw (amplitudes small enough) — callers may still project.
inline SupportCurve random_support_curve(std::uint64_t seed, int K = 8, double amplitude = 0.1) {
    std::mt19937_64 rng(seed);
    SupportCurve sc;
    sc.a0 = 1.0;
    for (int k = 2; k <= K; ++k) {
        const double scale = amplitude / (k * k);
        const double a = scale * (2.0 * uniform01(rng) - 1.0);
        const double b = scale * (2.0 * uniform01(rng) - 1.0);
        sc.coeffs.push_back({a, b});
    }
    return sc;
}

/// Circle support function plus one Fourier mode.
inline SupportCurve perturbed_circle_support(int mode, double amplitude) {
    SupportCurve sc;
    sc.a0 = 1.0;
    if (mode < 2) throw parameter_error("perturbed_circle_support: mode must be >= 2");
    sc.coeffs.assign(mode - 1, {0.0, 0.0});
    sc.coeffs[mode - 2] = {amplitude, 0.0};
    return sc;
}

}  // namespace fracwill
