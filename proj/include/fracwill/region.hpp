#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "fracwill/curve.hpp"
#include "fracwill/geometry.hpp"
#include "fracwill/parallel.hpp"

namespace fracwill {

/// Piecewise-linear wedge profile
///   g(t) = -m t (t < 0), 0 (0 <= t < t_tilde), m1 (t - t_tilde) (t >= t_tilde)
/// whose epigraph G = {y2 >= g(y1)} is the barrier set.
struct BarrierSpec {
    double m = 1.0;        // left slope, > 0
    double m1 = 0.0;       // right slope, >= 0
    double t_tilde = 1.0;  // flat-segment length, > 0

    double g(double t) const {
        if (t < 0.0) return -m * t;
        if (t < t_tilde) return 0.0;
        return m1 * (t - t_tilde);
    }
};

/// A measurable planar set for the region-based P.V. oracle.
struct RegionSpec {
    enum class Kind { halfplane, disk, wedge, polygon, curve_interior };

    Kind kind = Kind::disk;
    bool complemented = false;

    // halfplane: E = {y : <y - anchor, outward> <= 0}
    Vec2 hp_anchor{}, hp_outward{0.0, 1.0};
    // disk
    Vec2 disk_center{};
    double disk_radius = 1.0;
    // wedge epigraph
    BarrierSpec wedge{};
    // polygon / curve interior (closed, counterclockwise)
    std::vector<Vec2> poly;

    /// Half-width of the quadrature box about the evaluation point
    /// (0 = derived from the set).
    double box_halfwidth = 0.0;

    static RegionSpec halfplane(Vec2 anchor, Vec2 outward) {
        RegionSpec r;
        r.kind = Kind::halfplane;
        r.hp_anchor = anchor;
        r.hp_outward = outward.normalized();
        return r;
    }
    static RegionSpec disk(Vec2 center, double radius) {
        RegionSpec r;
        r.kind = Kind::disk;
        r.disk_center = center;
        r.disk_radius = radius;
        return r;
    }
    static RegionSpec wedge_epigraph(const BarrierSpec& b) {
        if (!(b.m > 0.0) || b.m1 < 0.0 || !(b.t_tilde > 0.0))
            throw parameter_error("wedge: need m > 0, m1 >= 0, t_tilde > 0");
        RegionSpec r;
        r.kind = Kind::wedge;
        r.wedge = b;
        return r;
    }
    static RegionSpec polygon(std::vector<Vec2> pts) {
        RegionSpec r;
        r.kind = Kind::polygon;
        r.poly = std::move(pts);
        return r;
    }
    static RegionSpec curve_interior(const ArcCurve& c) {
        RegionSpec r;
        r.kind = Kind::curve_interior;
        r.poly = c.nodes;
        return r;
    }

    RegionSpec complement() const {
        RegionSpec r = *this;
        r.complemented = !r.complemented;
        return r;
    }

    bool contains(Vec2 p) const {
        bool in;
        switch (kind) {
            case Kind::halfplane:
                in = dot(p - hp_anchor, hp_outward) <= 0.0;
                break;
            case Kind::disk:
                in = (p - disk_center).norm2() <= disk_radius * disk_radius;
                break;
            case Kind::wedge:
                in = p.y >= wedge.g(p.x);
                break;
            default: {  // even-odd rule
                bool odd = false;
                const std::size_t n = poly.size();
                for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                    const Vec2 a = poly[j], b = poly[i];
                    if ((b.y > p.y) != (a.y > p.y)) {
                        const double xx = b.x + (p.y - b.y) / (a.y - b.y) * (a.x - b.x);
                        if (p.x < xx) odd = !odd;
                    }
                }
                in = odd;
            }
        }
        return complemented ? !in : in;
    }

    /// Angular measure of the asymptotic cone of E (0 for bounded sets,
    /// pi for a halfplane, the wedge opening angle for an epigraph).
    double cone_angle() const {
        double a;
        switch (kind) {
            case Kind::halfplane: a = 3.141592653589793238462643383279502884; break;
            case Kind::wedge:
                a = 3.141592653589793238462643383279502884 - std::atan(wedge.m) -
                    std::atan(wedge.m1);
                break;
            default: a = 0.0;
        }
        return complemented ? 2.0 * 3.141592653589793238462643383279502884 - a : a;
    }

    /// Suitable box half-width about z: the set's far extent plus margin
    /// for bounded sets, a fixed multiple of the local scale otherwise.
    double auto_halfwidth(Vec2 z) const {
        if (box_halfwidth > 0.0) return box_halfwidth;
        switch (kind) {
            case Kind::disk:
                return distance(z, disk_center) + disk_radius + 0.25 * disk_radius;
            case Kind::polygon:
            case Kind::curve_interior: {
                double far = 0.0;
                for (const Vec2& p : poly) far = std::max(far, distance(z, p));
                return 1.25 * far;
            }
            case Kind::wedge:
                return 60.0 * (std::abs(z.x) + std::abs(z.y) + wedge.t_tilde);
            default:
                return 4.0;
        }
    }
};

// ---------------------------------------------------------------------------
// Exact rectangle/disk overlap (keeps the epsilon exclusion smooth in eps)

namespace detail {

// integral of sqrt(r^2 - t^2) dt from 0 to x, clamped to [-r, r]
inline double arc_integral(double x, double r) {
    x = std::clamp(x, -r, r);
    return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(x / r));
}

// area of {u in [a, r], v >= b} intersected with the disk u^2+v^2 <= r^2
inline double corner_area(double a, double b, double r) {
    if (a >= r || b >= r) return 0.0;
    a = std::max(a, -r);
    if (b <= -r) return (arc_integral(r, r) - arc_integral(a, r)) * 2.0;
    const double c = std::sqrt(std::max(0.0, r * r - b * b));
    double area = 0.0;
    const double lo = std::max(a, -c);
    if (lo < c) area += (arc_integral(c, r) - arc_integral(lo, r)) - b * (c - lo);
    if (b < 0.0) {
        const double l2 = std::max(a, c);
        if (l2 < r) area += 2.0 * (arc_integral(r, r) - arc_integral(l2, r));
        if (a < -c) area += 2.0 * (arc_integral(-c, r) - arc_integral(a, r));
    }
    return area;
}

/// Area of [x0,x1] x [y0,y1] intersected with the disk of radius r at the
/// origin.
inline double rect_disk_overlap(double x0, double x1, double y0, double y1, double r) {
    return corner_area(x0, y0, r) - corner_area(x1, y0, r) - corner_area(x0, y1, r) +
           corner_area(x1, y1, r);
}

/// Row-crossing cache for polygon chi on many collinear query points.
struct RowCache {
    const std::vector<Vec2>* poly = nullptr;
    std::map<long long, std::vector<double>> rows;
    double y_origin = 0.0, y_step = 0.0;

    const std::vector<double>& row(long long key, double y) {
        auto it = rows.find(key);
        if (it != rows.end()) return it->second;
        std::vector<double> xs;
        const auto& P = *poly;
        const std::size_t n = P.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2 a = P[j], b = P[i];
            if ((b.y > y) != (a.y > y))
                xs.push_back(b.x + (y - b.y) / (a.y - b.y) * (a.x - b.x));
        }
        std::sort(xs.begin(), xs.end());
        return rows.emplace(key, std::move(xs)).first->second;
    }

    bool inside(double x, long long key, double y) {
        const auto& xs = row(key, y);
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        return ((xs.end() - it) % 2) == 1;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// nmc_region_oracle

struct RegionOracleResult {
    double value = 0.0;               // Richardson-extrapolated to eps -> 0
    std::vector<double> per_eps;      // I(eps_k) including the analytic tail
    std::vector<double> eps_list;
    double residual = 0.0;            // spread between extrapolation pairs
    bool converged = true;            // false = no-convergence warning
    double grid_h = 0.0;
};

/// P.V. region integral of (chi_{E^c} - chi_E)/|z-y|^{2+s} by midpoint
/// quadrature on a uniform grid centered at z, with exact rectangle/disk
/// overlap at the eps-exclusion and tail circles, 4x4 midpoint refinement
/// of cells straddling dE, an analytic power-law tail outside the
/// inscribed disk, and Richardson extrapolation in eps with exponent 1-s.
inline RegionOracleResult nmc_region_oracle(const RegionSpec& region, Vec2 z, double s,
                                            std::vector<double> eps_list, double grid_h) {
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("nmc_region_oracle: s must be in (0,1)");
    if (eps_list.size() < 2) throw parameter_error("nmc_region_oracle: need >= 2 eps values");
    for (std::size_t k = 0; k + 1 < eps_list.size(); ++k)
        if (!(eps_list[k] > eps_list[k + 1]))
            throw parameter_error("nmc_region_oracle: eps_list must be strictly decreasing");
    if (eps_list.back() < grid_h)
        throw parameter_error("nmc_region_oracle: eps must be >= grid resolution");

    const double R = region.auto_halfwidth(z);
    const double h = grid_h;
    const long G = static_cast<long>(std::ceil(R / h));
    const double Rt = G * h;  // tail disk radius (inscribed in the grid square)
    const double diag = h * 0.7071067811865476 * 2.0;
    const double eps_max = eps_list.front();
    const std::size_t ne = eps_list.size();

    const bool cached_chi =
        region.kind == RegionSpec::Kind::polygon || region.kind == RegionSpec::Kind::curve_interior;

    const double ex = -(2.0 + s) / 2.0;
    auto kernel = [ex](double r2) { return std::pow(r2, ex); };

    struct RowResult {
        double common = 0.0;
        std::vector<double> corr;
    };
    std::vector<RowResult> rows(2 * G);

    // chi relative to z-centered coordinates
    auto make_chi = [&](detail::RowCache& cache) {
        return [&region, &cache, z, cached_chi](double ux, double uy, long long key) {
            if (!cached_chi) return region.contains({z.x + ux, z.y + uy});
            const bool in = cache.inside(z.x + ux, key, z.y + uy);
            return region.complemented ? !in : in;
        };
    };

    // pass A: mark cells whose corner/center signs disagree (dE crossing)
    const std::size_t W = static_cast<std::size_t>(2 * G);
    std::vector<char> mixed(W * W, 0);
    parallel_for(W, [&](std::size_t row_idx) {
        detail::RowCache cache;
        cache.poly = &region.poly;
        auto chi = make_chi(cache);
        const long iy = static_cast<long>(row_idx) - G;
        const double ylo = iy * h, yhi = ylo + h, yc = ylo + 0.5 * h;
        auto key_of = [&](double y) { return static_cast<long long>(std::llround(y / (h / 8.0))); };
        for (long ix = -G; ix < G; ++ix) {
            const double xlo = ix * h, xc = xlo + 0.5 * h;
            const double d = std::sqrt(xc * xc + yc * yc);
            if (d > Rt + diag) continue;
            const bool c00 = chi(xlo, ylo, key_of(ylo));
            const bool c10 = chi(xlo + h, ylo, key_of(ylo));
            const bool c01 = chi(xlo, yhi, key_of(yhi));
            const bool c11 = chi(xlo + h, yhi, key_of(yhi));
            const bool cc = chi(xc, yc, key_of(yc));
            if (!(c00 == c10 && c00 == c01 && c00 == c11 && c00 == cc))
                mixed[row_idx * W + static_cast<std::size_t>(ix + G)] = 1;
        }
    });
    // dilate by one cell so refinement is symmetric across dE
    std::vector<char> split_mask(W * W, 0);
    for (std::size_t ry = 0; ry < W; ++ry) {
        for (std::size_t rx = 0; rx < W; ++rx) {
            bool m = false;
            for (std::size_t dy = (ry > 0 ? ry - 1 : ry); dy <= std::min(W - 1, ry + 1) && !m; ++dy)
                for (std::size_t dx = (rx > 0 ? rx - 1 : rx); dx <= std::min(W - 1, rx + 1); ++dx)
                    if (mixed[dy * W + dx]) { m = true; break; }
            if (m) split_mask[ry * W + rx] = 1;
        }
    }

    // pass B: accumulate
    parallel_for(W, [&](std::size_t row_idx) {
        detail::RowCache cache;
        cache.poly = &region.poly;
        auto chi = make_chi(cache);
        const long iy = static_cast<long>(row_idx) - G;
        RowResult& out = rows[row_idx];
        out.corr.assign(ne, 0.0);

        const double ylo = iy * h, yc = ylo + 0.5 * h;
        auto key_of = [&](double y) { return static_cast<long long>(std::llround(y / (h / 8.0))); };

        for (long ix = -G; ix < G; ++ix) {
            const double xlo = ix * h, xc = xlo + 0.5 * h;
            const double d2 = xc * xc + yc * yc;
            const double d = std::sqrt(d2);
            if (d > Rt + diag) continue;

            const bool near_tail = d > Rt - diag;
            const bool near_eps = d < eps_max + 2.0 * h + diag;
            const bool split =
                split_mask[row_idx * W + static_cast<std::size_t>(ix + G)] || near_eps;

            const int sub = split ? 4 : 1;
            const double sh = h / sub;
            for (int jy = 0; jy < sub; ++jy) {
                for (int jx = 0; jx < sub; ++jx) {
                    const double sxlo = xlo + jx * sh, sylo = ylo + jy * sh;
                    const double sx = sxlo + 0.5 * sh, sy = sylo + 0.5 * sh;
                    const double sd2 = sx * sx + sy * sy;
                    const double sgn = chi(sx, sy, key_of(sy)) ? -1.0 : 1.0;
                    const double v = sgn * kernel(sd2);

                    double area_t = sh * sh;
                    if (near_tail)
                        area_t = detail::rect_disk_overlap(sxlo, sxlo + sh, sylo, sylo + sh, Rt);
                    if (area_t <= 0.0) continue;

                    if (!near_eps) {
                        out.common += v * area_t;
                    } else {
                        for (std::size_t k = 0; k < ne; ++k) {
                            const double cut =
                                detail::rect_disk_overlap(sxlo, sxlo + sh, sylo, sylo + sh,
                                                          eps_list[k]);
                            const double a = area_t - cut;
                            if (a > 0.0) out.corr[k] += v * a;
                        }
                    }
                }
            }
        }
    });

    double common = 0.0;
    std::vector<double> corr(ne, 0.0);
    for (const auto& r : rows) {
        common += r.common;
        for (std::size_t k = 0; k < ne; ++k) corr[k] += r.corr[k];
    }

    // analytic tail outside B_Rt: (2 pi - 2 alpha_cone) / s * Rt^{-s}
    const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    const double tail = (two_pi - 2.0 * region.cone_angle()) / s * std::pow(Rt, -s);

    RegionOracleResult res;
    res.grid_h = h;
    res.eps_list = eps_list;
    res.per_eps.resize(ne);
    for (std::size_t k = 0; k < ne; ++k) res.per_eps[k] = common + corr[k] + tail;

    // two-point Richardson, leading error ~ kappa * eps^{1-s}
    const double q = 1.0 - s;
    auto extrap = [&](std::size_t k1, std::size_t k2) {
        const double e1 = std::pow(eps_list[k1], q), e2 = std::pow(eps_list[k2], q);
        return res.per_eps[k2] + (res.per_eps[k2] - res.per_eps[k1]) * e2 / (e1 - e2);
    };
    res.value = extrap(ne - 2, ne - 1);
    if (ne >= 3) {
        const double alt = extrap(ne - 3, ne - 2);
        res.residual = std::abs(res.value - alt);
        const double scale = std::max(1e-12, std::abs(res.value));
        res.converged = res.residual <= 0.05 * scale + 1e-6;
    }
    return res;
}

/// Default epsilon ladder: large enough that the sliver between dE and
/// its tangent is resolved by the refined grid at every epsilon.
inline std::vector<double> default_eps_list(double grid_h) {
    return {48.0 * grid_h, 32.0 * grid_h, 16.0 * grid_h};
}

inline RegionOracleResult nmc_region_oracle(const RegionSpec& region, Vec2 z, double s,
                                            double grid_h = 1.0 / 400.0) {
    return nmc_region_oracle(region, z, s, default_eps_list(grid_h), grid_h);
}

// ---------------------------------------------------------------------------
// Maximum principle

struct MaxPrincipleResult {
    double H_A = 0.0;
    double H_B = 0.0;
    double margin = 0.0;  // H_A - H_B
    RegionOracleResult oracle_A, oracle_B;
};

/// Verifies A subset of B on a coarse sample grid, then evaluates both
/// curvatures at the common boundary point z by the region oracle.
inline MaxPrincipleResult max_principle_check(const RegionSpec& A, const RegionSpec& B, Vec2 z,
                                              double s, std::vector<double> eps_list,
                                              double grid_h) {
    const double R = A.auto_halfwidth(z);
    const int M = 160;
    for (int iy = 0; iy <= M; ++iy) {
        for (int ix = 0; ix <= M; ++ix) {
            const Vec2 p{z.x - R + 2.0 * R * ix / M, z.y - R + 2.0 * R * iy / M};
            if (A.contains(p) && !B.contains(p))
                throw constraint_error("max_principle_check: A not contained in B on the grid");
        }
    }
    MaxPrincipleResult res;
    res.oracle_A = nmc_region_oracle(A, z, s, eps_list, grid_h);
    res.oracle_B = nmc_region_oracle(B, z, s, eps_list, grid_h);
    res.H_A = res.oracle_A.value;
    res.H_B = res.oracle_B.value;
    res.margin = res.H_A - res.H_B;
    return res;
}

// ---------------------------------------------------------------------------
// Barrier curvature (open-curve boundary formula on the wedge graph)

namespace detail {

/// Gauss-Legendre 8-point nodes/weights on [-1,1].
inline const double* gl8_x() {
    static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
    return x;
}
inline const double* gl8_w() {
    static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};
    return w;
}

/// Composite Gauss quadrature on [a,b] with segments geometrically graded
/// toward both endpoints.
template <typename F>
double integrate_graded(F f, double a, double b, int segments = 48) {
    if (!(b > a)) return 0.0;
    std::vector<double> knots;
    knots.push_back(a);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int side = segments / 2;
    for (int i = side - 1; i >= 1; --i) knots.push_back(mid - half * std::pow(0.65, side - i));
    knots.push_back(mid);
    for (int i = 1; i <= side - 1; ++i) knots.push_back(mid + half * std::pow(0.65, i));
    knots.push_back(b);
    double sum = 0.0;
    const double* gx = gl8_x();
    const double* gw = gl8_w();
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k], hi = knots[k + 1];
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        for (int g = 0; g < 8; ++g) sum += gw[g] * f(c + r * gx[g]) * r;
    }
    return sum;
}

}  // namespace detail

struct BarrierCurvature {
    double direct = 0.0;  // (2/s)-scaled H on the wedge boundary at (x, g(x))
    double bound = 0.0;   // c * (|g(x)| + |x|)^{-s} with the supplied constant
};

/// Direct H^s at the wedge boundary point (x, g(x)) via the arc-length
/// boundary formula with analytic ray tails. x must avoid the corner at 0
/// and (when m1 > 0) the kink at t_tilde.
inline double barrier_curvature_direct(const BarrierSpec& b, double x, double s) {
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("barrier_curvature: s must be in (0,1)");
    if (x == 0.0 || (b.m1 > 0.0 && x == b.t_tilde))
        throw parameter_error("barrier_curvature: x is a corner of the wedge");
    if (x < 0.0) throw parameter_error("barrier_curvature: x must be > 0");
    if (b.m1 == 0.0 && x >= b.t_tilde) {
        // g is flat on [0, inf); treat as t_tilde = inf
    }

    const Vec2 z{x, b.g(x)};
    const double sm = std::sqrt(1.0 + b.m * b.m);
    const double s1 = std::sqrt(1.0 + b.m1 * b.m1);
    const Vec2 u{1.0 / sm, -b.m / sm};       // left-ray direction (arc-length)
    const Vec2 v{1.0 / s1, b.m1 / s1};       // right-ray direction
    const Vec2 nu = u.perp();                // (-m,-1)/sm, outward
    const Vec2 nflat{0.0, -1.0};
    const Vec2 nv = v.perp();                // (m1,-1)/s1

    const double scale = std::abs(x) + std::abs(b.g(x)) + b.t_tilde + 1.0;
    const double T = 120.0 * scale;

    auto piece = [&](Vec2 base, Vec2 dir, Vec2 nrm, double t0, double t1) {
        return detail::integrate_graded(
            [&](double t) {
                const Vec2 p = base + t * dir;
                const Vec2 diff = p - z;
                const double r2 = diff.norm2();
                if (r2 < 1e-280) return 0.0;  // z on this piece: numerator is 0 too
                return dot(nrm, diff) * std::pow(r2, -(2.0 + s) / 2.0);
            },
            t0, t1, 96);
    };

    // numerator on a ray is constant: <n, p - z> = -<n, z - base>
    auto ray_tail = [&](Vec2 base, Vec2 dir, Vec2 nrm, double T0) {
        const Vec2 w = z - base;
        const double cn = -dot(nrm, w);
        const double bq = dot(dir, w);         // |p - z|^2 = (t - bq)^2 + qq
        const double qq = std::max(0.0, w.norm2() - bq * bq);
        const double W = T0 - bq;              // T0 >> |bq|
        const double t1 = std::pow(W, -1.0 - s) / (1.0 + s);
        const double t2 = -(2.0 + s) * qq / 2.0 * std::pow(W, -3.0 - s) / (3.0 + s);
        const double t3 = (2.0 + s) * (4.0 + s) * qq * qq / 8.0 * std::pow(W, -5.0 - s) / (5.0 + s);
        return cn * (t1 + t2 + t3);
    };

    double sum = 0.0;
    // left ray: p = u*t for t in (-inf, 0]; mirrored to tau = -t
    sum += piece({0.0, 0.0}, (-1.0) * u, nu, 0.0, T);
    sum += ray_tail({0.0, 0.0}, (-1.0) * u, nu, T);
    if (b.m1 > 0.0) {
        sum += piece({0.0, 0.0}, {1.0, 0.0}, nflat, 0.0, b.t_tilde);
        sum += piece({b.t_tilde, 0.0}, v, nv, 0.0, T);
        sum += ray_tail({b.t_tilde, 0.0}, v, nv, T);
    } else {
        sum += piece({0.0, 0.0}, {1.0, 0.0}, nflat, 0.0, T);
        sum += ray_tail({0.0, 0.0}, {1.0, 0.0}, nflat, T);
    }
    return (2.0 / s) * sum;
}

/// Direct value plus the proposition-shaped lower bound c/(|g(x)|+|x|)^s,
/// with c estimated as the infimum of direct * (|g|+|x|)^s over a probe
/// grid.
inline BarrierCurvature barrier_curvature(const BarrierSpec& b, double x, double s,
                                          const std::vector<double>& probe_grid = {}) {
    BarrierCurvature out;
    out.direct = barrier_curvature_direct(b, x, s);
    std::vector<double> probes = probe_grid;
    if (probes.empty()) {
        const double top = (b.m1 > 0.0) ? 0.9 * b.t_tilde : 4.0 * b.t_tilde;
        for (int k = 0; k < 12; ++k) probes.push_back(top * std::pow(0.7, k));
    }
    double c = std::numeric_limits<double>::infinity();
    for (double p : probes) {
        const double d = barrier_curvature_direct(b, p, s);
        c = std::min(c, d * std::pow(std::abs(b.g(p)) + std::abs(p), s));
    }
    out.bound = c * std::pow(std::abs(b.g(x)) + std::abs(x), -s);
    return out;
}

}  // namespace fracwill
