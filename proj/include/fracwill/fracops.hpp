#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "fracwill/fft.hpp"
#include "fracwill/geometry.hpp"
#include "fracwill/parallel.hpp"

namespace fracwill {

inline constexpr double kTwoPi = 6.283185307179586476925286766559005768;

/// Sampled function on the circle (period 2 pi, samples at 2 pi k / M,
/// no duplicated endpoint) or on an interval (a, b) (midpoint grid).
struct GridFunction {
    enum class Domain { circle, interval };
    Domain domain = Domain::circle;
    double a = 0.0, b = kTwoPi;  // interval endpoints; circle uses [0, 2 pi)
    std::vector<double> samples;

    int size() const { return static_cast<int>(samples.size()); }
    double period() const { return b - a; }
    double h() const { return (b - a) / size(); }

    /// Sample abscissa: circle nodes at k h, interval midpoints.
    double x(int k) const {
        return domain == Domain::circle ? a + k * h() : a + (k + 0.5) * h();
    }

    static GridFunction on_circle(std::vector<double> samples) {
        GridFunction f;
        f.domain = Domain::circle;
        f.a = 0.0;
        f.b = kTwoPi;
        f.samples = std::move(samples);
        if (f.size() < 32) throw parameter_error("GridFunction: need M >= 32");
        return f;
    }
    static GridFunction on_interval(double a, double b, std::vector<double> samples) {
        GridFunction f;
        f.domain = Domain::interval;
        f.a = a;
        f.b = b;
        f.samples = std::move(samples);
        if (f.size() < 32) throw parameter_error("GridFunction: need M >= 32");
        if (!(b > a)) throw parameter_error("GridFunction: need b > a");
        return f;
    }

    template <typename F>
    static GridFunction sample_circle(int M, F f) {
        std::vector<double> s(M);
        for (int k = 0; k < M; ++k) s[k] = f(kTwoPi * k / M);
        return on_circle(std::move(s));
    }
    template <typename F>
    static GridFunction sample_interval(double a, double b, int M, F f) {
        std::vector<double> s(M);
        const double h = (b - a) / M;
        for (int k = 0; k < M; ++k) s[k] = f(a + (k + 0.5) * h);
        return on_interval(a, b, std::move(s));
    }

    double mean() const {
        double m = 0.0;
        for (double v : samples) m += v;
        return m / size();
    }

    double lp_norm(double p) const {
        double acc = 0.0;
        for (double v : samples) acc += std::pow(std::abs(v), p);
        return std::pow(acc * h(), 1.0 / p);
    }
};

/// Derivative samples: spectral on the circle, 4th-order central
/// differences (one-sided at the ends) on an interval.
inline std::vector<double> grid_derivative(const GridFunction& f) {
    const int M = f.size();
    if (f.domain == GridFunction::Domain::circle) return spectral_derivative(f.samples, f.period());
    std::vector<double> d(M);
    const double h = f.h();
    auto at = [&](int k) { return f.samples[std::clamp(k, 0, M - 1)]; };
    for (int k = 0; k < M; ++k) {
        if (k >= 2 && k < M - 2)
            d[k] = (-at(k + 2) + 8 * at(k + 1) - 8 * at(k - 1) + at(k - 2)) / (12 * h);
        else if (k >= 1 && k < M - 1)
            d[k] = (at(k + 1) - at(k - 1)) / (2 * h);
        else if (k == 0)
            d[k] = (at(1) - at(0)) / h;
        else
            d[k] = (at(M - 1) - at(M - 2)) / h;
    }
    return d;
}

struct SeminormResult {
    double value = 0.0;
    double order = 0.0;  // s or t
    double p = 0.0;
    GridFunction::Domain domain = GridFunction::Domain::circle;
    bool graded_flagged = false;  // t >= 1/2: near-diagonal handled by the derivative model
};

namespace detail {

/// Inner L^2 fractional difference integral at node i:
///   int |f(x_i) - f(y)|^2 / |x_i - y|^{1+2t} dy
/// midpoint sum off the diagonal, local correction 2 f'(x_i)^2
/// (h/2)^{2-2t} / (2-2t) for the excluded band |x - y| < h/2.
inline double gagliardo_inner(const GridFunction& f, const std::vector<double>& deriv, double t,
                              int i) {
    const int M = f.size();
    const double h = f.h();
    const bool circle = f.domain == GridFunction::Domain::circle;
    const double P = f.period();
    double sum = 0.0;
    const double fi = f.samples[i];
    for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        double d = std::abs(f.x(i) - f.x(j));
        if (circle) d = std::min(d, P - d);
        const double df = fi - f.samples[j];
        sum += df * df * std::pow(d, -1.0 - 2.0 * t) * h;
    }
    const double band = h / 2.0;
    sum += 2.0 * deriv[i] * deriv[i] * std::pow(band, 2.0 - 2.0 * t) / (2.0 - 2.0 * t);
    return sum;
}

}  // namespace detail

/// Gagliardo seminorm with inner L^2 and outer L^p:
///   ( int ( int |f(x)-f(y)|^2 / |x-y|^{1+2t} dy )^{p/2} dx )^{1/p}.
inline SeminormResult gagliardo_seminorm(const GridFunction& f, double t, double p) {
    if (!(t > 0.0 && t < 1.0)) throw parameter_error("gagliardo_seminorm: t must be in (0,1)");
    if (!(p >= 1.0)) throw parameter_error("gagliardo_seminorm: p must be >= 1");
    const int M = f.size();
    const auto deriv = grid_derivative(f);
    std::vector<double> inner(M);
    parallel_for(M, [&](std::size_t i) {
        inner[i] = detail::gagliardo_inner(f, deriv, t, static_cast<int>(i));
    });
    double acc = 0.0;
    for (double v : inner) acc += std::pow(v, p / 2.0);
    SeminormResult res;
    res.value = std::pow(acc * f.h(), 1.0 / p);
    res.order = t;
    res.p = p;
    res.domain = f.domain;
    res.graded_flagged = t >= 0.5;
    return res;
}

/// Same seminorm for a vector-valued sample set on a window of a closed
/// curve parameter line (used for curve tangents); dist is the arc step.
inline double gagliardo_seminorm_vec(const std::vector<Vec2>& v, double hstep, double t, double p) {
    const int M = static_cast<int>(v.size());
    std::vector<double> inner(M, 0.0);
    parallel_for(M, [&](std::size_t i) {
        double sum = 0.0;
        for (int j = 0; j < M; ++j) {
            if (static_cast<int>(i) == j) continue;
            const double d = std::abs(static_cast<int>(i) - j) * hstep;
            sum += (v[i] - v[j]).norm2() * std::pow(d, -1.0 - 2.0 * t) * hstep;
        }
        // derivative model from one-sided differences
        const int inext = std::min<int>(static_cast<int>(i) + 1, M - 1);
        const int iprev = std::max<int>(static_cast<int>(i) - 1, 0);
        const Vec2 dv = (v[inext] - v[iprev]) / ((inext - iprev) * hstep);
        sum += 2.0 * dv.norm2() * std::pow(hstep / 2.0, 2.0 - 2.0 * t) / (2.0 - 2.0 * t);
        inner[i] = sum;
    });
    double acc = 0.0;
    for (double w : inner) acc += std::pow(w, p / 2.0);
    return std::pow(acc * hstep, 1.0 / p);
}

/// |D|^sigma f = (-Delta)^{sigma/2} f by the Fourier multiplier |k|^sigma
/// (mean mode mapped to 0). Circle domain only.
inline GridFunction spectral_fractional_laplacian(const GridFunction& f, double sigma) {
    if (f.domain != GridFunction::Domain::circle)
        throw parameter_error("spectral_fractional_laplacian: periodic-only operation");
    if (sigma < 0.0) throw parameter_error("spectral_fractional_laplacian: sigma must be >= 0");
    GridFunction out = f;
    out.samples = apply_fourier_multiplier(
        f.samples, [sigma](int k) { return k == 0 ? 0.0 : std::pow(static_cast<double>(k), sigma); });
    return out;
}

/// [f]_{W^{s,1/s}_2} / || |D|^s f ||_{L^{1/s}} on the circle.
inline double stein_ratio(const GridFunction& f, double s) {
    if (f.domain != GridFunction::Domain::circle)
        throw parameter_error("stein_ratio: circle domain required");
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("stein_ratio: s must be in (0,1)");
    const double p = 1.0 / s;
    const double denom = spectral_fractional_laplacian(f, s).lp_norm(p);
    if (denom < 1e-300) throw parameter_error("stein_ratio: constant input (0/0)");
    return gagliardo_seminorm(f, s, p).value / denom;
}

// ---------------------------------------------------------------------------
// T-operator

/// T f(x) = int (f(x) - f(y) - f'(y)(x - y)) / |x - y|^{2+s} dy on the
/// line, for f compactly supported inside the grid interval. Far field by
/// direct quadrature, diagonal band |x-y| < delta via the second-order
/// model f''(x) delta^{1-s}/(1-s), exact power-law tails where f == 0.
inline GridFunction t_operator(const GridFunction& f, double s,
                               const std::vector<int>& eval_indices = {}) {
    if (f.domain != GridFunction::Domain::interval)
        throw parameter_error("t_operator: interval domain required");
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("t_operator: s must be in (0,1)");
    const int M = f.size();
    const double h = f.h();
    // compact support check: zero near both endpoints
    const int guard = std::max(2, M / 16);
    for (int k = 0; k < guard; ++k)
        if (std::abs(f.samples[k]) > 1e-12 || std::abs(f.samples[M - 1 - k]) > 1e-12)
            throw parameter_error("t_operator: support must stay clear of the interval ends");

    const auto d1 = grid_derivative(f);
    // second derivative by central differences of the samples
    std::vector<double> d2(M, 0.0);
    for (int k = 1; k + 1 < M; ++k)
        d2[k] = (f.samples[k + 1] - 2.0 * f.samples[k] + f.samples[k - 1]) / (h * h);

    std::vector<int> idx = eval_indices;
    if (idx.empty()) {
        idx.resize(M);
        for (int k = 0; k < M; ++k) idx[k] = k;
    }

    GridFunction out = f;
    out.samples.assign(M, 0.0);
    const double delta = 2.0 * h;
    parallel_for(idx.size(), [&](std::size_t w) {
        const int i = idx[w];
        const double xi = f.x(i);
        const double fi = f.samples[i];
        double sum = 0.0;
        for (int j = 0; j < M; ++j) {
            const double d = std::abs(xi - f.x(j));
            if (d < delta - 1e-12 * h) continue;
            const double wgt = (std::abs(d - delta) <= 1e-12 * h) ? 0.5 : 1.0;
            const double num = fi - f.samples[j] - d1[j] * (xi - f.x(j));
            sum += wgt * num * std::pow(d, -2.0 - s) * h;
        }
        sum += d2[i] * std::pow(delta, 1.0 - s) / (1.0 - s);
        // exact tails: f and f' vanish outside (a,b), numerator -> f(x)
        const double dl = xi - f.a;
        const double dr = f.b - xi;
        sum += fi * (std::pow(dl, -1.0 - s) + std::pow(dr, -1.0 - s)) / (1.0 + s);
        out.samples[i] = sum;
    });
    return out;
}

/// Spectral oracle for the T-operator: (-Delta)^{(s+1)/2} f on a
/// zero-padded periodic extension (factor 8).
inline GridFunction t_operator_spectral_oracle(const GridFunction& f, double s, int pad = 8) {
    if (f.domain != GridFunction::Domain::interval)
        throw parameter_error("t_operator_spectral_oracle: interval domain required");
    const int M = f.size();
    const int MP = pad * M;
    const double P = pad * (f.b - f.a);
    std::vector<double> padded(MP, 0.0);
    for (int k = 0; k < M; ++k) padded[k] = f.samples[k];
    const double w0 = kTwoPi / P;
    const double sigma = 1.0 + s;
    auto res = apply_fourier_multiplier(padded, [w0, sigma](int k) {
        return k == 0 ? 0.0 : std::pow(w0 * k, sigma);
    });
    GridFunction out = f;
    for (int k = 0; k < M; ++k) out.samples[k] = res[k];
    return out;
}

// ---------------------------------------------------------------------------
// Poincare / Sobolev checks

struct PoincareSobolev {
    double lhs_L1t = 0.0;        // ||f||_{L^{1/t}}
    double lhs_L2 = 0.0;         // ||f||_{L^2}
    double rhs = 0.0;            // [f]_{W^{t,1/t}_2}
    std::optional<double> embed_ratio;  // [f]_{W^{s,1/s}_2} / [f]_{W^{t,1/t}_2}
};

/// Both Poincare left-hand norms against the seminorm, and optionally the
/// Sobolev embedding ratio at a smaller order. The contract is finiteness
/// and refinement stability, not specific constants.
inline PoincareSobolev poincare_sobolev_check(const GridFunction& f, double t,
                                              std::optional<double> s_target = std::nullopt) {
    if (f.domain != GridFunction::Domain::interval)
        throw parameter_error("poincare_sobolev_check: interval domain required");
    if (std::abs(f.mean()) > 1e-10)
        throw parameter_error("poincare_sobolev_check: f must have zero mean");
    if (s_target && !(0.0 < *s_target && *s_target < t))
        throw parameter_error("poincare_sobolev_check: need 0 < s_target < t");
    PoincareSobolev out;
    out.lhs_L1t = f.lp_norm(1.0 / t);
    out.lhs_L2 = f.lp_norm(2.0);
    out.rhs = gagliardo_seminorm(f, t, 1.0 / t).value;
    if (s_target) {
        const double num = gagliardo_seminorm(f, *s_target, 1.0 / *s_target).value;
        out.embed_ratio = num / out.rhs;
    }
    return out;
}

}  // namespace fracwill
