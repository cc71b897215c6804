#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fracwill/curve.hpp"
#include "fracwill/geometry.hpp"

namespace fracwill {

/// Convex curve as a truncated Fourier support function
///   h(theta) = a0 + sum_{k=2..K} a_k cos(k theta) + b_k sin(k theta).
/// Mode k = 1 is a pure translation and is excluded. Convexity is the
/// radius-of-curvature constraint rho(theta) = h + h'' >= eps_kappa.
struct SupportCurve {
    double a0 = 1.0;
    std::vector<std::pair<double, double>> coeffs;  // (a_k, b_k), k = 2..K

    int max_mode() const { return static_cast<int>(coeffs.size()) + 1; }

    double h(double theta) const {
        double v = a0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const double k = static_cast<double>(i + 2);
            v += coeffs[i].first * std::cos(k * theta) + coeffs[i].second * std::sin(k * theta);
        }
        return v;
    }

    double h_prime(double theta) const {
        double v = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const double k = static_cast<double>(i + 2);
            v += k * (-coeffs[i].first * std::sin(k * theta) + coeffs[i].second * std::cos(k * theta));
        }
        return v;
    }

    /// Radius of curvature rho = h + h''.
    double rho(double theta) const {
        double v = a0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const double k = static_cast<double>(i + 2);
            const double w = 1.0 - k * k;
            v += w * (coeffs[i].first * std::cos(k * theta) + coeffs[i].second * std::sin(k * theta));
        }
        return v;
    }

    double min_rho(int grid = 2048) const {
        double m = std::numeric_limits<double>::infinity();
        for (int g = 0; g < grid; ++g)
            m = std::min(m, rho(2.0 * 3.141592653589793238462643383279502884 * g / grid));
        return m;
    }

    /// Boundary point with outer normal direction theta:
    /// gamma(theta) = h u + h' u_rot, u = (cos,sin), u_rot = (-sin,cos).
    Vec2 point(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        const double hv = h(theta), hp = h_prime(theta);
        return {hv * c - hp * s, hv * s + hp * c};
    }

    /// Perimeter by the Cauchy formula, L = integral of h = 2 pi a0.
    double perimeter() const { return 2.0 * 3.141592653589793238462643383279502884 * a0; }
};

/// Default curvature-radius floor keeping curves uniformly convex.
inline double default_eps_kappa(const SupportCurve& sc) { return 1e-3 * sc.a0; }

/// Realizes the support curve as an ArcCurve with N uniform arc nodes.
/// Throws constraint_error if rho dips below eps_kappa anywhere.
inline ArcCurve support_to_curve(const SupportCurve& sc, int N, double eps_kappa = -1.0) {
    if (eps_kappa < 0.0) eps_kappa = default_eps_kappa(sc);
    const int fine = std::max(8 * N, 4096);
    // slack absorbs the between-sample dip of the projection's dense-grid
    // guarantee (the projection floor holds at its own grid points)
    if (sc.min_rho(fine) < 0.98 * eps_kappa - 1e-8)
        throw constraint_error("support_to_curve: rho(theta) below eps_kappa; project first");
    std::vector<Vec2> pts(fine);
    for (int g = 0; g < fine; ++g)
        pts[g] = sc.point(2.0 * 3.141592653589793238462643383279502884 * g / fine);
    return make_arc_curve(pts, N, /*closed=*/true);
}

}  // namespace fracwill
