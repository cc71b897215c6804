#pragma once

#include <cmath>
#include <vector>

#include "fracwill/curve.hpp"
#include "fracwill/parallel.hpp"

namespace fracwill {

/// Per-node fractional mean curvature samples. `values` carries the
/// (2/s)-scaled surface-integral values (units length^{-s}); `raw` the
/// unscaled inner integrals that the energy integrand uses, so the two
/// normalizations are never merged silently.
struct CurvatureSamples {
    std::vector<double> values;
    std::vector<double> raw;
    double s = 0.0;
    double near_diag_cutoff = 0.0;  // delta, arc length
    enum class Method { boundary, region } method = Method::boundary;
};

/// Signed discrete curvature at node i: Menger curvature of three
/// consecutive nodes (positive where the curve turns left).
inline double menger_curvature(const ArcCurve& c, int i) {
    const int n = c.size();
    Vec2 p0, p1 = c.nodes[i], p2;
    if (c.closed) {
        p0 = c.nodes[(i - 1 + n) % n];
        p2 = c.nodes[(i + 1) % n];
    } else {
        if (i == 0 || i == n - 1) return 0.0;
        p0 = c.nodes[i - 1];
        p2 = c.nodes[i + 1];
    }
    const Vec2 a = p1 - p0, b = p2 - p1, d = p2 - p0;
    const double denom = a.norm() * b.norm() * d.norm();
    if (denom == 0.0) return 0.0;
    return 2.0 * cross(a, b) / denom;
}

namespace detail {

/// Inner integral of the desingularized curvature integrand at node i:
///   sum_j w_j <n_j, g_j - g_i - t_j (y_j - x_i)> / |g_j - g_i|^{2+s} * dl
/// with trapezoid weights outside the band |y - x| < delta and the band
/// replaced by the local expansion kappa_i * delta^{1-s} / (1-s).
/// `absolute` applies |.| to every contribution (band uses |kappa|).
inline double nmc_inner_integral(const ArcCurve& c, double s, int i, double delta,
                                 bool absolute, int j_lo, int j_hi) {
    const int n = c.size();
    const double dl = c.spacing;
    const int band = static_cast<int>(std::floor(delta / dl + 1e-12));
    const double ex = -(2.0 + s) / 2.0;
    const Vec2 gi = c.nodes[i];
    double sum = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        const int jj = c.closed ? ((j % n) + n) % n : j;
        if (jj < 0 || jj >= n) continue;
        // j runs over a window centered at i, so |j - i| is the true
        // (possibly wrapped) arc separation in steps
        const double arc_sep = std::abs(j - i) * dl;
        if (arc_sep < delta - 1e-12 * dl) continue;
        double w = 1.0;
        if (std::abs(arc_sep - delta) <= 1e-12 * (delta + dl)) w = 0.5;
        const Vec2 diff = c.nodes[jj] - gi;
        const double r2 = diff.norm2();
        if (r2 < 1e-24 * c.length() * c.length())
            throw geometry_error("nmc: node collision outside the diagonal band");
        const double signed_sep = (j - i) * dl;
        const Vec2 num_vec = diff - signed_sep * c.tangents[jj];
        double term = dot(c.normals[jj], num_vec) * std::pow(r2, ex);
        if (absolute) term = std::abs(term);
        sum += w * term * dl;
    }
    double kappa = menger_curvature(c, i);
    if (absolute) kappa = std::abs(kappa);
    bool band_inside = true;
    if (!c.closed) band_inside = (i - band >= 0) && (i + band < n);
    if (band_inside && band > 0) sum += kappa * std::pow(delta, 1.0 - s) / (1.0 - s);
    return sum;
}

}  // namespace detail

/// Default near-diagonal cutoff.
inline double default_delta(const ArcCurve& c) { return 4.0 * c.spacing; }

/// Fractional mean curvature at node i by the desingularized surface
/// integral, (2/s)-scaled.
inline double nmc_boundary(const ArcCurve& c, double s, int i, double delta = -1.0) {
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("nmc_boundary: s must be in (0,1)");
    if (delta < 0.0) delta = default_delta(c);
    const int n = c.size();
    int j_lo = 0, j_hi = n - 1;
    if (c.closed) {
        j_lo = i - n / 2;
        j_hi = j_lo + n - 1;
    }
    return (2.0 / s) * detail::nmc_inner_integral(c, s, i, delta, false, j_lo, j_hi);
}

/// All-node evaluation.
inline CurvatureSamples nmc_boundary_all(const ArcCurve& c, double s, double delta = -1.0) {
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("nmc_boundary_all: s must be in (0,1)");
    if (delta < 0.0) delta = default_delta(c);
    CurvatureSamples out;
    out.s = s;
    out.near_diag_cutoff = delta;
    out.method = CurvatureSamples::Method::boundary;
    const int n = c.size();
    out.values.resize(n);
    out.raw.resize(n);
    parallel_for(n, [&](std::size_t i) {
        int j_lo = 0, j_hi = n - 1;
        if (c.closed) {
            j_lo = static_cast<int>(i) - n / 2;
            j_hi = j_lo + n - 1;
        }
        const double raw =
            detail::nmc_inner_integral(c, s, static_cast<int>(i), delta, false, j_lo, j_hi);
        out.raw[i] = raw;
        out.values[i] = (2.0 / s) * raw;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Corner blow-up diagnostics

struct CornerFit {
    double exponent = 0.0;   // alpha in H ~ C |x - x0|^alpha
    double log_prefactor = 0.0;
    int probes_used = 0;
};

/// Least-squares slope of log|H| vs log(distance) on one side of a
/// flagged corner. Probe distances must span at least a decade with all
/// probes >= 5 spacings from the corner.
inline CornerFit corner_exponent_fit(const ArcCurve& c, double s, double corner_arc,
                                     const std::vector<double>& probe_dists,
                                     double delta = -1.0) {
    if (probe_dists.size() < 4)
        throw parameter_error("corner_exponent_fit: need at least 4 probe distances");
    double lo = probe_dists.front(), hi = probe_dists.front();
    for (double d : probe_dists) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        if (d < 5.0 * c.spacing)
            throw parameter_error("corner_exponent_fit: probes must be >= 5 spacings");
    }
    if (hi / lo < 10.0 - 1e-9)
        throw parameter_error("corner_exponent_fit: probes must span a decade");

    std::vector<double> lx, ly;
    for (double d : probe_dists) {
        const int idx = c.node_at_arc(corner_arc + d);
        const double H = nmc_boundary(c, s, idx, delta);
        if (!(std::abs(H) > 0.0) || !std::isfinite(H)) continue;
        lx.push_back(std::log(d));
        ly.push_back(std::log(std::abs(H)));
    }
    if (lx.size() < 4) throw parameter_error("corner_exponent_fit: fewer than 4 valid probes");

    const std::size_t m = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    CornerFit fit;
    fit.probes_used = static_cast<int>(m);
    const double denom = m * sxx - sx * sx;
    fit.exponent = (m * sxy - sx * sy) / denom;
    fit.log_prefactor = (sy - fit.exponent * sx) / m;
    return fit;
}

}  // namespace fracwill
