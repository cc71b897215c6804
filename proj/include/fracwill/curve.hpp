#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "fracwill/fft.hpp"
#include "fracwill/geometry.hpp"

namespace fracwill {

/// Closed (or open) curve as uniform arc-length node samples with unit
/// tangents and normals n = t^perp. `spacing` is the arc step between
/// consecutive nodes measured along the source polyline.
struct ArcCurve {
    std::vector<Vec2> nodes;
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;
    double spacing = 0.0;
    bool closed = true;

    int size() const { return static_cast<int>(nodes.size()); }

    /// Total arc length (for open curves: between first and last node).
    double length() const {
        return closed ? spacing * size() : spacing * (size() - 1);
    }

    /// Arc position of node i.
    double arc(int i) const { return spacing * i; }

    /// Arc distance between nodes (shortest way around when closed).
    double arc_distance(int i, int j) const {
        int d = std::abs(i - j);
        if (closed) d = std::min(d, size() - d);
        return spacing * d;
    }

    /// Node index nearest to arc position s (wraps when closed).
    int node_at_arc(double s) const {
        const int n = size();
        long k = std::lround(s / spacing);
        if (closed) {
            k %= n;
            if (k < 0) k += n;
        } else {
            k = std::clamp(k, 0L, static_cast<long>(n - 1));
        }
        return static_cast<int>(k);
    }

    double signed_area() const { return 0.5 * signed_area2(nodes); }

    ArcCurve scaled(double rho) const {
        ArcCurve c = *this;
        for (auto& p : c.nodes) p = rho * p;
        c.spacing = rho * spacing;
        return c;
    }

    ArcCurve rotated(double theta) const {
        ArcCurve c = *this;
        for (auto& p : c.nodes) p = rotate(p, theta);
        for (auto& t : c.tangents) t = rotate(t, theta);
        for (auto& n : c.normals) n = rotate(n, theta);
        return c;
    }

    ArcCurve translated(Vec2 v) const {
        ArcCurve c = *this;
        for (auto& p : c.nodes) p += v;
        return c;
    }

    /// Orientation reversal (swaps E and E^c for the enclosed region).
    ArcCurve reversed() const {
        ArcCurve c = *this;
        std::reverse(c.nodes.begin(), c.nodes.end());
        std::reverse(c.tangents.begin(), c.tangents.end());
        std::reverse(c.normals.begin(), c.normals.end());
        for (auto& t : c.tangents) t = (-1.0) * t;
        for (auto& n : c.normals) n = (-1.0) * n;
        return c;
    }
};

struct ConvexityReport {
    bool is_convex = false;
    /// Worst signed violation in length units (>= -tol_geom iff convex):
    /// min over node pairs of <nu_x, gamma(x)-gamma(y)> merged with the
    /// spacing-normalized minimum edge cross product.
    double worst_violation = 0.0;
    std::vector<Vec2> supporting_normals;
};

/// Convexity tolerance: floating-point cross products on near-collinear
/// edges make an exact test meaningless.
inline double convexity_tolerance(const ArcCurve& c) { return 1e-8 * c.length(); }

// ---------------------------------------------------------------------------
// resample_arclength

/// Resamples a polyline to N nodes at equal arc-length spacing along it.
/// Node k sits at arc k*L/N measured from the first input point.
inline ArcCurve resample_arclength(const std::vector<Vec2>& points, int N, bool closed = true) {
    if (static_cast<int>(points.size()) < 8)
        throw geometry_error("resample_arclength: need at least 8 points");
    const std::size_t n = points.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n - 1; ++i)
        cum[i + 1] = cum[i] + distance(points[i], points[i + 1]);
    cum[n] = cum[n - 1] + (closed ? distance(points[n - 1], points[0]) : 0.0);
    const double L = closed ? cum[n] : cum[n - 1];
    if (!(L > 0.0) || L < 1e-300)
        throw geometry_error("resample_arclength: degenerate polyline (zero length)");

    ArcCurve out;
    out.closed = closed;
    out.nodes.resize(N);
    const int segs = closed ? N : N - 1;
    out.spacing = L / segs;
    std::size_t seg = 0;
    for (int k = 0; k < N; ++k) {
        double s = out.spacing * k;
        if (s > L) s = L;
        while (seg + 1 < n + 1 && cum[seg + 1] < s) ++seg;
        const Vec2 a = points[seg % n];
        const Vec2 b = points[(seg + 1) % n];
        const double den = cum[seg + 1] - cum[seg];
        const double t = den > 0.0 ? (s - cum[seg]) / den : 0.0;
        out.nodes[k] = a + t * (b - a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// tangent_normal

/// Arc positions of detected corners: edge-to-edge turns above the
/// threshold (default 10*spacing radians), adjacent hits merged.
struct CornerInfo {
    double arc_position = 0.0;   // along the curve, between the two flanking nodes
    int node_before = 0;         // last node of the incoming edge run
    double turn = 0.0;           // total turn angle absorbed by this corner
};

inline std::vector<CornerInfo> detect_corners(const ArcCurve& c, double turn_threshold = -1.0) {
    const int n = c.size();
    if (turn_threshold < 0.0) turn_threshold = 10.0 * c.spacing;
    std::vector<double> turn(n, 0.0);
    const int lo = c.closed ? 0 : 1;
    const int hi = c.closed ? n : n - 1;
    for (int i = lo; i < hi; ++i) {
        const Vec2 e0 = c.nodes[i] - c.nodes[(i - 1 + n) % n];
        const Vec2 e1 = c.nodes[(i + 1) % n] - c.nodes[i];
        turn[i] = std::atan2(cross(e0, e1), dot(e0, e1));
    }
    std::vector<CornerInfo> corners;
    int i = 0;
    while (i < n) {
        if (std::abs(turn[i]) > turn_threshold) {
            int j = i;
            double total = 0.0, weighted = 0.0;
            while (j < n && std::abs(turn[j]) > turn_threshold) {
                total += turn[j];
                weighted += turn[j] * c.arc(j);
                ++j;
            }
            CornerInfo info;
            info.turn = total;
            info.arc_position = weighted / total;
            info.node_before = (i - 1 + n) % n;
            corners.push_back(info);
            i = j;
        } else {
            ++i;
        }
    }
    // a cluster may wrap past node 0 on a closed curve
    if (c.closed && corners.size() >= 2 && std::abs(turn[0]) > turn_threshold &&
        std::abs(turn[n - 1]) > turn_threshold) {
        corners.front().turn += corners.back().turn;
        corners.pop_back();
    }
    return corners;
}

/// Fills tangents (spectral differentiation for smooth closed curves,
/// central differences with one-sided stencils at detected corners) and
/// normals n = t^perp, all renormalized to unit length.
inline ArcCurve tangent_normal(ArcCurve c) {
    const int n = c.size();
    if (n < 16) throw geometry_error("tangent_normal: need at least 16 nodes");
    c.tangents.assign(n, Vec2{});
    c.normals.assign(n, Vec2{});

    const auto corners = detect_corners(c);
    const bool smooth_closed = c.closed && corners.empty();

    if (smooth_closed) {
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = c.nodes[i].x;
            ys[i] = c.nodes[i].y;
        }
        const double L = c.length();
        const auto dx = spectral_derivative(xs, L);
        const auto dy = spectral_derivative(ys, L);
        for (int i = 0; i < n; ++i) c.tangents[i] = Vec2{dx[i], dy[i]}.normalized();
    } else {
        auto node = [&](int i) {
            if (c.closed) return c.nodes[((i % n) + n) % n];
            return c.nodes[std::clamp(i, 0, n - 1)];
        };
        std::vector<double> turn(n, 0.0);
        const double thresh = 10.0 * c.spacing;
        for (int i = 0; i < n; ++i) {
            if (!c.closed && (i == 0 || i == n - 1)) continue;
            const Vec2 e0 = node(i) - node(i - 1);
            const Vec2 e1 = node(i + 1) - node(i);
            turn[i] = std::atan2(cross(e0, e1), dot(e0, e1));
        }
        auto flagged = [&](int i) {
            if (!c.closed && (i < 0 || i >= n)) return false;
            return std::abs(turn[((i % n) + n) % n]) > thresh;
        };
        for (int i = 0; i < n; ++i) {
            Vec2 t;
            if (flagged(i)) {
                // one-sided toward the straight run; a node sitting exactly
                // on a corner (both neighbors straight) takes the bisector
                if (flagged(i + 1) && !flagged(i - 1))
                    t = node(i) - node(i - 1);
                else if (flagged(i - 1) && !flagged(i + 1))
                    t = node(i + 1) - node(i);
                else
                    t = node(i + 1) - node(i - 1);
            } else if (!c.closed && i == 0) {
                t = node(1) - node(0);
            } else if (!c.closed && i == n - 1) {
                t = node(n - 1) - node(n - 2);
            } else {
                t = node(i + 1) - node(i - 1);
            }
            c.tangents[i] = t.normalized();
        }
    }
    for (int i = 0; i < n; ++i) c.normals[i] = c.tangents[i].perp();
    return c;
}

/// resample + tangent_normal in one step.
inline ArcCurve make_arc_curve(const std::vector<Vec2>& points, int N, bool closed = true) {
    return tangent_normal(resample_arclength(points, N, closed));
}

// ---------------------------------------------------------------------------
// convexity_check

/// Sign-constancy of edge cross products plus the supporting-line
/// inequality <nu_x, gamma(x)-gamma(y)> >= -tol over all node pairs,
/// with nu_x the curve normal at x.
inline ConvexityReport convexity_check(const ArcCurve& c) {
    const int n = c.size();
    ConvexityReport rep;
    rep.supporting_normals = c.normals;
    const double tol = convexity_tolerance(c);

    double min_cross = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Vec2 e0 = c.nodes[(i + 1) % n] - c.nodes[i];
        const Vec2 e1 = c.nodes[(i + 2) % n] - c.nodes[(i + 1) % n];
        min_cross = std::min(min_cross, cross(e0, e1));
    }

    double min_dot = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Vec2 nu = c.normals[i];
        const Vec2 p = c.nodes[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            min_dot = std::min(min_dot, dot(nu, p - c.nodes[j]));
        }
    }

    rep.worst_violation = std::min(min_dot, min_cross / c.spacing);
    rep.is_convex = rep.worst_violation >= -tol;
    return rep;
}

// ---------------------------------------------------------------------------
// hull_gap

/// Two-sided Hausdorff distance between the node polyline and the
/// boundary of its convex hull (dense deterministic sampling of both).
inline double hull_gap(const ArcCurve& c) {
    const auto hull = convex_hull(c.nodes);
    if (hull.size() < 3) return 0.0;

    auto chain_samples = [](const std::vector<Vec2>& chain, int per_edge) {
        std::vector<Vec2> out;
        const std::size_t m = chain.size();
        out.reserve(m * per_edge);
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 a = chain[i], b = chain[(i + 1) % m];
            for (int k = 0; k < per_edge; ++k)
                out.push_back(a + (static_cast<double>(k) / per_edge) * (b - a));
        }
        return out;
    };
    auto dist_to_chain = [](Vec2 p, const std::vector<Vec2>& chain) {
        double best = std::numeric_limits<double>::infinity();
        const std::size_t m = chain.size();
        for (std::size_t i = 0; i < m; ++i)
            best = std::min(best, point_segment_distance(p, chain[i], chain[(i + 1) % m]));
        return best;
    };

    double gap = 0.0;
    for (const Vec2 p : chain_samples(c.nodes, 8)) gap = std::max(gap, dist_to_chain(p, hull));
    for (const Vec2 p : chain_samples(hull, 16)) gap = std::max(gap, dist_to_chain(p, c.nodes));
    return gap;
}

// ---------------------------------------------------------------------------
// bilipschitz_profile

struct BilipschitzProfile {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

/// Min and max of chord/arc over node pairs with arc distance <= 2r.
inline BilipschitzProfile bilipschitz_profile(const ArcCurve& c, double r) {
    if (!(r > 0.0) || (c.closed && r >= c.length() / 4.0))
        throw parameter_error("bilipschitz_profile: need 0 < r < L/4");
    const int n = c.size();
    const int w = std::max(1, static_cast<int>(std::floor(2.0 * r / c.spacing)));
    BilipschitzProfile prof;
    prof.min_ratio = std::numeric_limits<double>::infinity();
    prof.max_ratio = 0.0;
    for (int i = 0; i < n; ++i) {
        const int jmax = c.closed ? i + w : std::min(n - 1, i + w);
        for (int j = i + 1; j <= jmax; ++j) {
            const int jj = c.closed ? j % n : j;
            const double ratio = distance(c.nodes[i], c.nodes[jj]) / c.arc_distance(i, jj);
            prof.min_ratio = std::min(prof.min_ratio, ratio);
            prof.max_ratio = std::max(prof.max_ratio, ratio);
        }
    }
    return prof;
}

// ---------------------------------------------------------------------------
// graph_window_check

enum class GraphShape { convex, concave, neither };

struct GraphWindowReport {
    bool is_graph = false;
    GraphShape shape = GraphShape::neither;
};

/// Projects the window about node x0 onto the tangent line there;
/// is_graph iff projected abscissae are strictly monotone, shape from
/// the sign of the second divided differences of the ordinates.
inline GraphWindowReport graph_window_check(const ArcCurve& c, int x0, double halfwidth) {
    if (c.closed && halfwidth >= c.length() / 2.0)
        throw parameter_error("graph_window_check: window must be < L/2");
    const int n = c.size();
    const int w = static_cast<int>(std::floor(halfwidth / c.spacing));
    const Vec2 t0 = c.tangents[x0];
    const Vec2 n0 = c.normals[x0];
    const Vec2 p0 = c.nodes[x0];

    std::vector<double> ab, ord;
    const int lo = c.closed ? x0 - w : std::max(0, x0 - w);
    const int hi = c.closed ? x0 + w : std::min(n - 1, x0 + w);
    for (int j = lo; j <= hi; ++j) {
        const int jj = ((j % n) + n) % n;
        ab.push_back(dot(c.nodes[jj] - p0, t0));
        ord.push_back(dot(c.nodes[jj] - p0, n0));
    }

    GraphWindowReport rep;
    const std::size_t m = ab.size();
    if (m < 3) return rep;
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < m; ++k)
        if (!(ab[k + 1] > ab[k])) { monotone = false; break; }
    rep.is_graph = monotone;
    if (!monotone) return rep;

    // second divided differences of ordinate vs abscissa
    const double tol = 1e-10;
    bool any_pos = false, any_neg = false;
    for (std::size_t k = 0; k + 2 < m; ++k) {
        const double s1 = (ord[k + 1] - ord[k]) / (ab[k + 1] - ab[k]);
        const double s2 = (ord[k + 2] - ord[k + 1]) / (ab[k + 2] - ab[k + 1]);
        const double dd = s2 - s1;
        if (dd > tol) any_pos = true;
        if (dd < -tol) any_neg = true;
    }
    if (any_pos && any_neg)
        rep.shape = GraphShape::neither;
    else if (any_neg)
        rep.shape = GraphShape::concave;
    else
        rep.shape = GraphShape::convex;
    return rep;
}

// ---------------------------------------------------------------------------
// self_proximity_scan

struct ProximityPair {
    int i = 0;
    int j = 0;
    double chord = 0.0;
    double arc = 0.0;
};

/// Exhaustive node-pair scan for chord < rho/10 with arc distance > rho.
/// An empty result certifies discrete embeddedness at scale rho.
inline std::vector<ProximityPair> self_proximity_scan(const ArcCurve& c, double rho) {
    if (!(rho > 0.0) || rho >= c.length() / 4.0)
        throw parameter_error("self_proximity_scan: need 0 < rho < L/4");
    std::vector<ProximityPair> hits;
    const int n = c.size();
    const double thresh = rho / 10.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double arc = c.arc_distance(i, j);
            if (arc <= rho) continue;
            const double chord = distance(c.nodes[i], c.nodes[j]);
            if (chord < thresh) hits.push_back({i, j, chord, arc});
        }
    }
    return hits;
}

}  // namespace fracwill
