#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracwill/energy.hpp"
#include "fracwill/support_curve.hpp"

namespace fracwill {

struct DescentConfig {
    double s = 0.5;
    int K = 8;          // Fourier truncation of the support function
    int N = 512;        // curve resolution
    double step0 = 0.05;
    double shrink = 0.5;
    double grow = 1.3;
    int max_iters = 40;
    double grad_tol = 1e-4;
    double eps_kappa = 1e-3;
    double h_fd = 1e-4;  // finite-difference probe
    std::uint64_t seed = 0;

    void validate() const {
        if (!(shrink > 0.0 && shrink < 1.0 && grow > 1.0))
            throw parameter_error("DescentConfig: need 0 < shrink < 1 < grow");
        if (!(grad_tol > 0.0)) throw parameter_error("DescentConfig: grad_tol must be > 0");
    }
};

struct DescentStep {
    SupportCurve shape;
    double energy = 0.0;
    double grad_norm = 0.0;
    double step_size = 0.0;
    bool accepted = true;
};

struct DescentTrace {
    std::vector<DescentStep> iterates;
    SupportCurve final_shape;
    double final_energy = 0.0;
    std::string termination = "";

    std::vector<const DescentStep*> accepted() const {
        std::vector<const DescentStep*> out;
        for (const auto& s : iterates)
            if (s.accepted) out.push_back(&s);
        return out;
    }
};

// ---------------------------------------------------------------------------
// project_convex

namespace detail {

/// Clip rho at the given level on the grid, then refit the truncated
/// Fourier series; rho_k = (1 - k^2) h_k recovers the coefficients.
inline SupportCurve clip_and_refit(const SupportCurve& sc, double level, int grid) {
    const int K = sc.max_mode();
    const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    std::vector<double> rho(grid);
    for (int g = 0; g < grid; ++g) rho[g] = std::max(sc.rho(two_pi * g / grid), level);
    SupportCurve out = sc;
    double a0 = 0.0;
    for (double r : rho) a0 += r;
    out.a0 = a0 / grid;
    for (int k = 2; k <= K; ++k) {
        double ca = 0.0, cb = 0.0;
        for (int g = 0; g < grid; ++g) {
            const double th = two_pi * g / grid;
            ca += rho[g] * std::cos(k * th);
            cb += rho[g] * std::sin(k * th);
        }
        const double w = 1.0 - static_cast<double>(k) * k;
        out.coeffs[k - 2].first = (2.0 * ca / grid) / w;
        out.coeffs[k - 2].second = (2.0 * cb / grid) / w;
    }
    return out;
}

}  // namespace detail

/// Smallest-change enforcement of rho(theta) = h + h'' >= eps_kappa:
/// clipping of rho on a dense grid followed by Fourier truncation, with
/// the clip level bisected down to the lowest feasible one (truncation
/// rings below the clip level, so the level must sit above eps_kappa).
/// Idempotent on feasible input.
inline SupportCurve project_convex(const SupportCurve& sc, double eps_kappa, int grid = 4096,
                                   int max_sweeps = 100) {
    if (sc.min_rho(grid) >= eps_kappa - 1e-9) return sc;

    auto feasible = [&](double level, SupportCurve& out) {
        out = detail::clip_and_refit(sc, level, grid);
        return out.min_rho(grid) >= eps_kappa - 1e-9;
    };

    SupportCurve cand;
    double hi = std::max(eps_kappa, 1e-3 * sc.a0);
    int sweeps = 0;
    while (!feasible(hi, cand)) {
        hi *= 2.0;
        if (++sweeps > max_sweeps)
            throw constraint_error("project_convex: no convergence in max_sweeps");
    }
    double lo = eps_kappa;
    SupportCurve best = cand;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid, cand)) {
            hi = mid;
            best = cand;
        } else {
            lo = mid;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// energy_of_support / fd_gradient

/// Critical energy W_{s,1/s} of the realized curve.
inline double energy_of_support(const SupportCurve& sc, double s, int N, double eps_kappa = -1.0) {
    const ArcCurve c = support_to_curve(sc, N, eps_kappa);
    return willmore_energy(c, FracParams::critical(s)).total;
}

/// Coefficient-space gradient by central finite differences; entry order
/// is (a0, a_2, b_2, ..., a_K, b_K).
inline std::vector<double> fd_gradient(const SupportCurve& sc, double s, int N, double h_fd,
                                       double eps_kappa = 1e-3) {
    if (!(h_fd >= 1e-6 * sc.a0))
        throw parameter_error("fd_gradient: h_fd below the valid central-difference scale");
    const int K = sc.max_mode();
    const int dim = 1 + 2 * (K - 1);
    std::vector<double> grad(dim, 0.0);

    auto perturbed = [&](int entry, double eps) {
        SupportCurve p = sc;
        if (entry == 0)
            p.a0 += eps;
        else {
            const int k = (entry - 1) / 2;
            if ((entry - 1) % 2 == 0)
                p.coeffs[k].first += eps;
            else
                p.coeffs[k].second += eps;
        }
        return p;
    };

    std::vector<double> slot(2 * dim);
    parallel_for(static_cast<std::size_t>(2 * dim), [&](std::size_t w) {
        const int entry = static_cast<int>(w) / 2;
        const double sign = (w % 2 == 0) ? 1.0 : -1.0;
        double h = h_fd;
        for (int attempt = 0;; ++attempt) {
            try {
                slot[w] = energy_of_support(perturbed(entry, sign * h), s, N, eps_kappa);
                break;
            } catch (const constraint_error&) {
                if (attempt >= 1) throw;
                h *= 0.25;  // shrink the probe once, then give up
            }
        }
    });
    for (int e = 0; e < dim; ++e) grad[e] = (slot[2 * e] - slot[2 * e + 1]) / (2.0 * h_fd);
    return grad;
}

// ---------------------------------------------------------------------------
// minimize_descent

namespace detail {

/// Gauge fixing: perimeter 2 pi (a0 = 1 by the Cauchy formula, scaling
/// the whole shape) — translations are excluded by construction (no k=1
/// modes).
inline SupportCurve renormalize_gauge(SupportCurve sc) {
    const double scale = 1.0 / sc.a0;
    sc.a0 = 1.0;
    for (auto& c : sc.coeffs) {
        c.first *= scale;
        c.second *= scale;
    }
    return sc;
}

inline double grad_norm_modes(const std::vector<double>& g) {
    double acc = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) acc += g[i] * g[i];  // modes k >= 2 only
    return std::sqrt(acc);
}

}  // namespace detail

/// Projected gradient descent with backtracking on the support
/// coefficients; after each accepted step the shape is re-gauged
/// (perimeter 2 pi) and re-projected. Accepted energies are
/// nonincreasing by construction.
inline DescentTrace minimize_descent(const DescentConfig& cfg, const SupportCurve& init) {
    cfg.validate();
    DescentTrace trace;

    SupportCurve cur = detail::renormalize_gauge(project_convex(init, cfg.eps_kappa));
    double E = energy_of_support(cur, cfg.s, cfg.N, cfg.eps_kappa);
    if (!std::isfinite(E)) throw parameter_error("minimize_descent: non-finite energy at init");
    trace.iterates.push_back({cur, E, 0.0, 0.0, true});

    double step = cfg.step0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto g = fd_gradient(cur, cfg.s, cfg.N, cfg.h_fd, cfg.eps_kappa);
        const double gn = detail::grad_norm_modes(g);
        if (gn < cfg.grad_tol) {
            trace.termination = "grad_tol";
            break;
        }
        bool accepted = false;
        while (step >= 1e-12) {
            SupportCurve cand = cur;
            for (int k = 0; k < static_cast<int>(cand.coeffs.size()); ++k) {
                cand.coeffs[k].first -= step * g[1 + 2 * k];
                cand.coeffs[k].second -= step * g[2 + 2 * k];
            }
            cand = detail::renormalize_gauge(project_convex(cand, cfg.eps_kappa));
            double Ec;
            try {
                Ec = energy_of_support(cand, cfg.s, cfg.N, cfg.eps_kappa);
            } catch (const constraint_error&) {
                trace.iterates.push_back({cand, E, gn, step, false});
                step *= cfg.shrink;
                continue;
            }
            if (Ec <= E) {
                cur = cand;
                E = Ec;
                trace.iterates.push_back({cur, E, gn, step, true});
                step *= cfg.grow;
                accepted = true;
                break;
            }
            trace.iterates.push_back({cand, Ec, gn, step, false});
            step *= cfg.shrink;
        }
        if (!accepted) {
            trace.termination = "step_collapse";
            break;
        }
    }
    if (trace.termination.empty()) trace.termination = "max_iters";
    trace.final_shape = cur;
    trace.final_energy = E;
    return trace;
}

// ---------------------------------------------------------------------------
// lsc_check

struct LscResult {
    double W_limit = 0.0;
    double liminf_proxy = 0.0;
    bool holds = false;
    std::vector<double> sequence_energies;
};

/// liminf proxy = min over the last half of the sequence energies;
/// holds iff W(limit) <= proxy + tol (relative tolerance).
inline LscResult lsc_check(const std::vector<ArcCurve>& sequence, const ArcCurve& limit, double s,
                           double tol_rel = 1e-4) {
    if (sequence.size() < 4) throw parameter_error("lsc_check: need a sequence of length >= 4");
    const FracParams crit = FracParams::critical(s);
    LscResult out;
    for (const auto& c : sequence) {
        if (c.size() != limit.size())
            throw parameter_error("lsc_check: all curves must share N");
        out.sequence_energies.push_back(willmore_energy(c, crit).total);
    }
    out.W_limit = willmore_energy(limit, crit).total;
    double proxy = std::numeric_limits<double>::infinity();
    for (std::size_t k = out.sequence_energies.size() / 2; k < out.sequence_energies.size(); ++k)
        proxy = std::min(proxy, out.sequence_energies[k]);
    out.liminf_proxy = proxy;
    out.holds = out.W_limit <= proxy + tol_rel * std::max(1.0, std::abs(proxy));
    return out;
}

// ---------------------------------------------------------------------------
// concentration_scan

struct ConcentrationPoint {
    double arc_position = 0.0;  // on the final curve's parameter
    double worst_local_energy = 0.0;
};

struct ConcentrationReport {
    std::vector<ConcentrationPoint> points;  // Sigma_discrete, clustered
    double eps = 0.0;
    double Lambda = 0.0;     // sup of global (absolute) energies
    int covering_bound = 0;  // floor(2^p * Lambda / eps)
    bool bound_holds = false;
};

/// Marks arc positions whose windowed absolute energy exceeds eps for
/// every tested radius and every tail-index curve; adjacent suspect
/// nodes cluster into single points.
inline ConcentrationReport concentration_scan(const std::vector<ArcCurve>& sequence, double s,
                                              double eps, const std::vector<double>& radii) {
    if (!(eps > 0.0)) throw parameter_error("concentration_scan: eps must be > 0");
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        if (!(radii[k] > radii[k + 1]))
            throw parameter_error("concentration_scan: radii must be decreasing");

    const FracParams crit = FracParams::critical(s);
    const std::size_t tail_start = sequence.size() / 2;
    const int n = sequence.back().size();
    const int stride = std::max(1, n / 256);

    ConcentrationReport rep;
    rep.eps = eps;

    for (const auto& c : sequence)
        rep.Lambda = std::max(rep.Lambda,
                              willmore_energy(c, crit, std::nullopt, std::nullopt, true).total);

    // suspect(x0) <=> for every tested r and every tail curve the local
    // absolute energy over B(x0,r) stays above eps
    std::vector<char> suspect(n, 0);
    std::vector<double> worst(n, std::numeric_limits<double>::infinity());
    for (int i0 = 0; i0 < n; i0 += stride) suspect[i0] = 1;

    for (std::size_t k = tail_start; k < sequence.size(); ++k) {
        const auto& c = sequence[k];
        const double L = c.length();
        for (int i0 = 0; i0 < n; i0 += stride) {
            if (!suspect[i0]) continue;
            for (double r : radii) {
                double a = c.arc(i0) - r, b = c.arc(i0) + r;
                a = std::fmod(a + 2.0 * L, L);
                b = std::fmod(b, L);
                ArcWindow win{a, b};
                const double e = willmore_energy(c, crit, win, win, true).total;
                worst[i0] = std::min(worst[i0], e);
                if (e <= eps) {
                    suspect[i0] = 0;
                    break;
                }
            }
        }
    }

    // cluster adjacent suspect strides (wraparound) into single points
    const auto& ref = sequence.back();
    std::vector<int> idx;
    for (int i0 = 0; i0 < n; i0 += stride)
        if (suspect[i0]) idx.push_back(i0);
    if (!idx.empty()) {
        std::vector<std::vector<int>> clusters;
        clusters.push_back({idx[0]});
        for (std::size_t k = 1; k < idx.size(); ++k) {
            if (idx[k] - clusters.back().back() <= 2 * stride)
                clusters.back().push_back(idx[k]);
            else
                clusters.push_back({idx[k]});
        }
        // wraparound merge
        if (clusters.size() >= 2 && idx.front() <= 2 * stride &&
            (n - idx.back()) <= 2 * stride) {
            for (int v : clusters.front()) clusters.back().push_back(v);
            clusters.erase(clusters.begin());
        }
        for (const auto& cl : clusters) {
            // circular mean over node positions (clusters may wrap node 0)
            double cs = 0.0, sn = 0.0, w = std::numeric_limits<double>::infinity();
            const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
            for (int v : cl) {
                cs += std::cos(two_pi * v / n);
                sn += std::sin(two_pi * v / n);
                w = std::min(w, worst[v]);
            }
            double ang = std::atan2(sn, cs);
            if (ang < 0.0) ang += two_pi;
            rep.points.push_back({ref.length() * ang / two_pi, w});
        }
    }

    const double p = crit.p;
    rep.covering_bound = static_cast<int>(std::floor(std::pow(2.0, p) * rep.Lambda / eps));
    rep.bound_holds = static_cast<int>(rep.points.size()) <= rep.covering_bound;
    return rep;
}

}  // namespace fracwill
