#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fracwill/curvature.hpp"
#include "fracwill/curve.hpp"
#include "fracwill/parallel.hpp"

namespace fracwill {

struct FracParams {
    double s = 0.5;
    double p = 2.0;

    FracParams() = default;
    FracParams(double s_, double p_) : s(s_), p(p_) {
        if (!(s > 0.0 && s < 1.0)) throw parameter_error("FracParams: s must be in (0,1)");
        if (!(p >= 1.0)) throw parameter_error("FracParams: p must be >= 1");
    }
    static FracParams critical(double s_) { return FracParams(s_, 1.0 / s_); }

    bool is_critical() const { return std::abs(p * s - 1.0) <= 1e-12; }
};

/// Arc interval [a, b] on the curve parameter; wraparound allowed on
/// closed curves (a > b means the window passes through 0).
struct ArcWindow {
    double a = 0.0;
    double b = 0.0;

    bool contains(double x, double length, bool closed) const {
        if (!closed || a <= b) return x >= a && x <= b;
        return x >= a || x <= b;  // wrapped
    }
};

struct EnergyBreakdown {
    double total = 0.0;
    std::vector<double> inner;  // inner-integral value at each node in the outer window
    std::vector<int> outer_nodes;
    FracParams params;
    std::optional<ArcWindow> window_outer, window_inner;
    bool absolute = false;
    double delta = 0.0;  // near-diagonal cutoff used

    /// Presentation variants of the total (outer exponent s / outer root
    /// 1/p); never used in comparisons.
    double pow_s() const { return std::pow(total, params.s); }
    double pow_1p() const { return std::pow(total, 1.0 / params.p); }
};

/// Nonlocal Willmore energy: total = sum_i |I(x_i)|^p * dl over the outer
/// window, I the desingularized inner integral (no 2/s factor). With
/// absolute set, |.| is applied inside the inner integral.
inline EnergyBreakdown willmore_energy(const ArcCurve& c, FracParams params,
                                       std::optional<ArcWindow> outer = std::nullopt,
                                       std::optional<ArcWindow> inner = std::nullopt,
                                       bool absolute = false, double delta = -1.0) {
    if (delta < 0.0) delta = default_delta(c);
    const int n = c.size();
    const double L = c.length();

    EnergyBreakdown out;
    out.params = params;
    out.window_outer = outer;
    out.window_inner = inner;
    out.absolute = absolute;
    out.delta = delta;

    std::vector<int> outer_idx;
    for (int i = 0; i < n; ++i) {
        if (outer && !outer->contains(c.arc(i), L, c.closed)) continue;
        outer_idx.push_back(i);
    }
    out.outer_nodes = outer_idx;
    out.inner.assign(outer_idx.size(), 0.0);

    parallel_for(outer_idx.size(), [&](std::size_t k) {
        const int i = outer_idx[k];
        int j_lo = 0, j_hi = n - 1;
        if (c.closed) {
            j_lo = i - n / 2;
            j_hi = j_lo + n - 1;
        }
        if (!inner) {
            out.inner[k] = detail::nmc_inner_integral(c, params.s, i, delta, absolute, j_lo, j_hi);
            return;
        }
        // windowed inner integral: restrict j to the arc window
        double sum = 0.0;
        const double dl = c.spacing;
        for (int j = j_lo; j <= j_hi; ++j) {
            const int jj = c.closed ? ((j % n) + n) % n : j;
            if (jj < 0 || jj >= n) continue;
            if (!inner->contains(c.arc(jj), L, c.closed)) continue;
            const double arc_sep = std::abs(j - i) * dl;
            if (arc_sep < delta - 1e-12 * dl) continue;
            double w = (std::abs(arc_sep - delta) <= 1e-12 * (delta + dl)) ? 0.5 : 1.0;
            const Vec2 diff = c.nodes[jj] - c.nodes[i];
            const double r2 = diff.norm2();
            if (r2 < 1e-24 * L * L)
                throw geometry_error("willmore_energy: node collision outside the band");
            const double sep = (j - i) * dl;
            double term = dot(c.normals[jj], diff - sep * c.tangents[jj]) *
                          std::pow(r2, -(2.0 + params.s) / 2.0);
            if (absolute) term = std::abs(term);
            sum += w * term * dl;
        }
        if (inner->contains(c.arc(i), L, c.closed)) {
            double kappa = menger_curvature(c, i);
            if (absolute) kappa = std::abs(kappa);
            sum += kappa * std::pow(delta, 1.0 - params.s) / (1.0 - params.s);
        }
        out.inner[k] = sum;
    });

    double total = 0.0;
    for (double v : out.inner) total += std::pow(std::abs(v), params.p) * c.spacing;
    out.total = total;
    return out;
}

// ---------------------------------------------------------------------------
// scaling_check

struct ScalingCheck {
    double W = 0.0;
    double W_scaled = 0.0;
    double predicted_ratio = 0.0;  // rho^{1 - p s}
    double observed_ratio = 0.0;
};

/// Energy of the node-dilated, arc-rescaled curve against the prediction
/// W(gamma_rho) = rho^{1-ps} W(gamma); at critical p the ratio is 1.
inline ScalingCheck scaling_check(const ArcCurve& c, FracParams params, double rho) {
    if (!(rho > 0.0)) throw parameter_error("scaling_check: rho must be > 0");
    ScalingCheck out;
    out.W = willmore_energy(c, params).total;
    out.W_scaled = willmore_energy(c.scaled(rho), params).total;
    out.predicted_ratio = std::pow(rho, 1.0 - params.p * params.s);
    out.observed_ratio = out.W_scaled / out.W;
    return out;
}

// ---------------------------------------------------------------------------
// bmo_profile

struct BmoProfile {
    std::vector<double> scales;
    std::vector<double> suprema;  // sup over centers of the mean p-oscillation of gamma'
    double p = 1.0;

    double sup_all() const {
        double m = 0.0;
        for (double v : suprema) m = std::max(m, v);
        return m;
    }
};

namespace detail {

/// (mean over the window pairs of |gamma'(x)-gamma'(y)|^p)^{1/p} for the
/// window of halfwidth r centered at node i0.
inline double window_oscillation(const ArcCurve& c, double p, int i0, double r) {
    const int n = c.size();
    const int w = static_cast<int>(std::floor(r / c.spacing));
    std::vector<const Vec2*> ts;
    for (int j = i0 - w; j <= i0 + w; ++j) {
        if (c.closed)
            ts.push_back(&c.tangents[((j % n) + n) % n]);
        else if (j >= 0 && j < n)
            ts.push_back(&c.tangents[j]);
    }
    const std::size_t m = ts.size();
    if (m < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            sum += std::pow((*ts[a] - *ts[b]).norm(), p);
    const double mean = 2.0 * sum / (static_cast<double>(m) * static_cast<double>(m));
    return std::pow(mean, 1.0 / p);
}

}  // namespace detail

/// Per-scale suprema over all window centers of the double mean
/// oscillation of the tangent at exponent p.
inline BmoProfile bmo_profile(const ArcCurve& c, double p, const std::vector<double>& scales) {
    if (!(p >= 1.0)) throw parameter_error("bmo_profile: p must be >= 1");
    BmoProfile out;
    out.p = p;
    out.scales = scales;
    out.suprema.resize(scales.size());
    const int n = c.size();
    for (std::size_t k = 0; k < scales.size(); ++k) {
        std::vector<double> per_center(n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            per_center[i] = detail::window_oscillation(c, p, static_cast<int>(i), scales[k]);
        });
        double sup = 0.0;
        for (double v : per_center) sup = std::max(sup, v);
        out.suprema[k] = sup;
    }
    return out;
}

// ---------------------------------------------------------------------------
// vmo_bound_check

struct VmoBound {
    double ratio = 0.0;          // sup_r profile / (windowed absolute energy)^s
    double window_energy = 0.0;  // worst windowed absolute critical energy
    double window_halfwidth = 0.0;
    bool applicable = true;      // false = above the smallness threshold
};

/// Worst ratio of tangent oscillation to (windowed absolute critical
/// energy)^s. The window halfwidth R0 defaults to twice the largest
/// scale; applicability requires the windowed energy below eps_vmo.
inline VmoBound vmo_bound_check(const ArcCurve& c, double s, double p,
                                const std::vector<double>& scales, double eps_vmo = 1e-2,
                                double R0 = -1.0) {
    if (scales.empty()) throw parameter_error("vmo_bound_check: need scales");
    if (R0 < 0.0) {
        for (double r : scales) R0 = std::max(R0, r);
        R0 *= 2.0;
    }
    const int n = c.size();
    const int stride = std::max(1, n / 64);
    const FracParams crit = FracParams::critical(s);

    double worst_energy = 0.0;
    for (int i0 = 0; i0 < n; i0 += stride) {
        const double a = c.arc(i0) - R0, b = c.arc(i0) + R0;
        const double L = c.length();
        ArcWindow win{std::fmod(a + L, L), std::fmod(b, L)};
        const double e = willmore_energy(c, crit, win, win, /*absolute=*/true).total;
        worst_energy = std::max(worst_energy, e);
    }

    const auto profile = bmo_profile(c, p, scales);

    VmoBound out;
    out.window_energy = worst_energy;
    out.window_halfwidth = R0;
    out.applicable = worst_energy < eps_vmo;
    out.ratio = worst_energy > 0.0 ? profile.sup_all() / std::pow(worst_energy, s)
                                   : (profile.sup_all() > 0.0
                                          ? std::numeric_limits<double>::infinity()
                                          : 0.0);
    return out;
}

}  // namespace fracwill
