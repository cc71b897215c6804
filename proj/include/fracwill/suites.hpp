#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracwill/curvature.hpp"
#include "fracwill/energy.hpp"
#include "fracwill/fracops.hpp"
#include "fracwill/io.hpp"
#include "fracwill/minimize.hpp"
#include "fracwill/region.hpp"
#include "fracwill/shapes.hpp"
#include "fracwill/version.hpp"

namespace fracwill {

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    std::vector<std::string> outputs;  // files written under out_dir
    double wall_time_s = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline void add_check(SuiteResult& r, const std::string& name, bool pass, double measured,
                      double threshold, const std::string& detail = "") {
    r.checks.push_back({name, pass, measured, threshold, detail});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// scaling: critical invariance and the subcritical exponent

inline SuiteResult suite_scaling(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"scaling"};
    const int N = cfg.get_int("scaling.N", 512);
    const auto ell = ellipse_curve(N, 1.0, 0.6);

    CsvWriter csv;
    csv.header({"case", "rho", "observed_ratio", "predicted_ratio", "deviation"});

    auto t0 = std::chrono::steady_clock::now();
    const FracParams crit(0.5, 2.0);
    for (double rho : {0.5, 2.0, 10.0}) {
        const auto sc = scaling_check(ell, crit, rho);
        const double dev = std::abs(sc.observed_ratio - 1.0);
        detail::add_check(res, "critical_invariance_rho_" + fmt_double(rho), dev < 1e-10, dev,
                          1e-10);
        csv.row({"critical", fmt_double(rho), fmt_double(sc.observed_ratio),
                 fmt_double(sc.predicted_ratio), fmt_double(dev)});
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::add_check(res, "critical_runtime_s", dt < 5.0, dt, 5.0);

    t0 = std::chrono::steady_clock::now();
    const FracParams sub(0.25, 2.0);
    const double W0 = willmore_energy(ell, sub).total;
    for (double rho : {2.0, 4.0, 8.0}) {
        const double Wr = willmore_energy(ell.scaled(rho), sub).total;
        const double slope = std::log(Wr / W0) / std::log(rho);
        const double dev = std::abs(slope - 0.5);
        detail::add_check(res, "subcritical_slope_rho_" + fmt_double(rho), dev < 1e-6, dev, 1e-6);
        csv.row({"subcritical", fmt_double(rho), fmt_double(slope), fmt_double(0.5),
                 fmt_double(dev)});
    }
    dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::add_check(res, "subcritical_runtime_s", dt < 5.0, dt, 5.0);

    csv.save(out_dir + "/scaling.csv");
    res.outputs.push_back("scaling.csv");
    return res;
}

// ---------------------------------------------------------------------------
// oracle: boundary formula vs region quadrature, halfplane zero

inline SuiteResult suite_oracle(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"oracle"};
    const int N = cfg.get_int("oracle.N", 1024);
    const double h = cfg.get_double("oracle.grid_h", 1.0 / 400.0);
    const auto t0 = std::chrono::steady_clock::now();

    CsvWriter csv;
    csv.header({"shape", "s", "boundary", "region", "rel_disagreement"});

    const auto disk_curve = circle_curve(N);
    const auto disk_region = RegionSpec::disk({0.0, 0.0}, 1.0);
    const auto ell_curve = ellipse_curve(N, 1.0, 0.6);
    const auto ell_region = RegionSpec::curve_interior(ell_curve);

    for (double s : {0.3, 0.5, 0.7}) {
        {
            const double hb = nmc_boundary(disk_curve, s, 0);
            const auto oc = nmc_region_oracle(disk_region, {1.0, 0.0}, s, h);
            const double rel = std::abs(hb - oc.value) / std::abs(oc.value);
            detail::add_check(res, "disk_agreement_s_" + fmt_double(s), rel < 0.02, rel, 0.02);
            csv.row({"disk", fmt_double(s), fmt_double(hb), fmt_double(oc.value), fmt_double(rel)});
        }
        {
            const double hb = nmc_boundary(ell_curve, s, 0);
            const auto oc = nmc_region_oracle(ell_region, ell_curve.nodes[0], s, h);
            const double rel = std::abs(hb - oc.value) / std::abs(oc.value);
            detail::add_check(res, "ellipse_agreement_s_" + fmt_double(s), rel < 0.02, rel, 0.02);
            csv.row({"ellipse", fmt_double(s), fmt_double(hb), fmt_double(oc.value),
                     fmt_double(rel)});
        }
    }

    // halfplane zero by both methods at s = 0.5
    {
        const auto hp = RegionSpec::halfplane({0.0, 0.0}, {0.0, 1.0});
        const auto oc = nmc_region_oracle(hp, {0.0, 0.0}, 0.5, h);
        detail::add_check(res, "halfplane_zero_region", std::abs(oc.value) < 1e-3,
                          std::abs(oc.value), 1e-3);
        const auto seg = segment_curve(513, 40.0);
        const double hb = nmc_boundary(seg, 0.5, 256);
        detail::add_check(res, "halfplane_zero_boundary", std::abs(hb) < 1e-3, std::abs(hb), 1e-3);
        csv.row({"halfplane_region", fmt_double(0.5), "", fmt_double(oc.value), ""});
        csv.row({"halfplane_boundary", fmt_double(0.5), fmt_double(hb), "", ""});
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::add_check(res, "oracle_runtime_s", dt < 120.0, dt, 120.0);
    csv.save(out_dir + "/oracle.csv");
    res.outputs.push_back("oracle.csv");
    return res;
}

// ---------------------------------------------------------------------------
// maxprinciple: nested disks plus convex positivity

inline SuiteResult suite_maxprinciple(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"maxprinciple"};
    const double h = cfg.get_double("maxprinciple.grid_h", 1.0 / 400.0);
    const double s = 0.5;

    CsvWriter csv;
    csv.header({"case", "value"});

    {
        const auto A = RegionSpec::disk({0.0, 0.0}, 1.0);
        const auto B = RegionSpec::disk({-1.0, 0.0}, 2.0);
        const auto mp = max_principle_check(A, B, {1.0, 0.0}, s, default_eps_list(h), h);
        detail::add_check(res, "nested_disks_margin_positive", mp.margin > 0.0, mp.margin, 0.0);
        detail::add_check(res, "outer_disk_nonnegative", mp.H_B >= -1e-3 * std::abs(mp.H_B),
                          mp.H_B, 0.0);
        csv.row({"H_A_unit_disk", fmt_double(mp.H_A)});
        csv.row({"H_B_radius2_disk", fmt_double(mp.H_B)});
        csv.row({"margin", fmt_double(mp.margin)});
    }

    // convex positivity over 10 seeded random support curves
    double worst_rel = std::numeric_limits<double>::infinity();
    for (int seed = 0; seed < 10; ++seed) {
        const auto sc = project_convex(random_support_curve(seed, 8, 0.3), 1e-3);
        const auto c = support_to_curve(sc, 512, 1e-3);
        const auto H = nmc_boundary_all(c, s);
        double mn = std::numeric_limits<double>::infinity(), mxabs = 0.0;
        for (double v : H.values) {
            mn = std::min(mn, v);
            mxabs = std::max(mxabs, std::abs(v));
        }
        worst_rel = std::min(worst_rel, mn / mxabs);
        csv.row({"convex_min_over_max_seed_" + std::to_string(seed), fmt_double(mn / mxabs)});
    }
    detail::add_check(res, "convex_positivity_10_random", worst_rel >= -1e-3, worst_rel, -1e-3);

    csv.save(out_dir + "/maxprinciple.csv");
    res.outputs.push_back("maxprinciple.csv");
    return res;
}

// ---------------------------------------------------------------------------
// corners: blow-up exponent and the critical/supercritical dichotomy

inline SuiteResult suite_corners(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"corners"};

    // corner exponent fits on the near-sharp square
    {
        const auto t0 = std::chrono::steady_clock::now();
        const int N = cfg.get_int("corners.N", 16384);
        const auto sq = rounded_square_curve(N, 1.0, 2.5 * 4.0 / N);
        const auto corners = detect_corners(sq);
        const double carc = corners.at(1).arc_position;

        CsvWriter csv;
        csv.header({"s", "probe_dist", "H"});
        for (double s : {0.3, 0.5, 0.7}) {
            std::vector<double> probes;
            const double d0 = 5.000001 * sq.spacing;
            for (int k = 0; k <= 10; ++k) probes.push_back(d0 * std::pow(10.0, k / 10.0));
            const auto fit = corner_exponent_fit(sq, s, carc, probes);
            const double dev = std::abs(fit.exponent + s);
            detail::add_check(res, "corner_exponent_s_" + fmt_double(s), dev <= 0.1, fit.exponent,
                              -s, "|alpha + s| <= 0.1");
            for (double d : probes) {
                const double H = nmc_boundary(sq, s, sq.node_at_arc(carc + d));
                csv.row({fmt_double(s), fmt_double(d), fmt_double(H)});
            }
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        detail::add_check(res, "corner_fit_runtime_s", dt < 60.0, dt, 60.0);
        csv.save(out_dir + "/corner_profile.csv");
        res.outputs.push_back("corner_profile.csv");
    }

    // dichotomy ladder on the sharp square
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<int> ladder{64, 128, 256, 512, 1024, 2048};
        std::vector<double> Ep2, Ep1;
        CsvWriter csv;
        csv.header({"N", "E_p2", "E_p1"});
        for (int N : ladder) {
            const auto sq = square_curve(N);
            Ep2.push_back(willmore_energy(sq, FracParams(0.5, 2.0)).total);
            Ep1.push_back(willmore_energy(sq, FracParams(0.5, 1.0)).total);
            csv.row({std::to_string(N), fmt_double(Ep2.back()), fmt_double(Ep1.back())});
        }
        csv.save(out_dir + "/dichotomy.csv");
        res.outputs.push_back("dichotomy.csv");

        // p = 2 (critical): energy must gain at least c0 per doubling
        const double c0 = 0.5;
        for (std::size_t k = 0; k + 1 < Ep2.size(); ++k) {
            const double inc = Ep2[k + 1] - Ep2[k];
            detail::add_check(res, "critical_divergence_step_" + std::to_string(k), inc >= c0, inc,
                              c0);
        }
        // p = 1 (supercritical): successive differences shrink by >= 1.5x
        for (std::size_t k = 0; k + 2 < Ep1.size(); ++k) {
            const double r = std::abs(Ep1[k + 1] - Ep1[k]) / std::abs(Ep1[k + 2] - Ep1[k + 1]);
            detail::add_check(res, "supercritical_shrink_step_" + std::to_string(k), r >= 1.5, r,
                              1.5, "corner-cutoff scaling gives 2^{1-ps} ~ 1.414 asymptotically");
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        detail::add_check(res, "dichotomy_runtime_s", dt < 120.0, dt, 120.0);
    }
    return res;
}

// ---------------------------------------------------------------------------
// sobolev: Stein equivalence witness and the T-operator identity

inline SuiteResult suite_sobolev(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"sobolev"};
    const int n_funcs = cfg.get_int("sobolev.functions", 20);

    CsvWriter csv;
    csv.header({"func", "s", "ratio_M256", "ratio_M512", "drift"});

    // seeded band-limited family: sum over modes k <= 8 with 1/k decay
    auto sample_family = [&](int idx, int M) {
        std::mt19937_64 rng(1000 + idx);
        std::vector<double> amp_c(9, 0.0), amp_s(9, 0.0);
        for (int k = 1; k <= 8; ++k) {
            amp_c[k] = (2.0 * uniform01(rng) - 1.0) / k;
            amp_s[k] = (2.0 * uniform01(rng) - 1.0) / k;
        }
        return GridFunction::sample_circle(M, [&](double x) {
            double v = 0.0;
            for (int k = 1; k <= 8; ++k)
                v += amp_c[k] * std::cos(k * x) + amp_s[k] * std::sin(k * x);
            return v;
        });
    };

    double worst_lo = std::numeric_limits<double>::infinity(), worst_hi = 0.0, worst_drift = 0.0;
    for (double s : {0.3, 0.5, 0.7}) {
        for (int i = 0; i < n_funcs; ++i) {
            const double r1 = stein_ratio(sample_family(i, 256), s);
            const double r2 = stein_ratio(sample_family(i, 512), s);
            const double drift = std::abs(r2 / r1 - 1.0);
            worst_lo = std::min(worst_lo, std::min(r1, r2));
            worst_hi = std::max(worst_hi, std::max(r1, r2));
            worst_drift = std::max(worst_drift, drift);
            csv.row({std::to_string(i), fmt_double(s), fmt_double(r1), fmt_double(r2),
                     fmt_double(drift)});
        }
    }
    detail::add_check(res, "stein_ratios_lower", worst_lo >= 0.1, worst_lo, 0.1);
    detail::add_check(res, "stein_ratios_upper", worst_hi <= 10.0, worst_hi, 10.0);
    detail::add_check(res, "stein_ratio_stability", worst_drift < 0.05, worst_drift, 0.05);
    csv.save(out_dir + "/stein.csv");
    res.outputs.push_back("stein.csv");

    // T-operator vs spectral oracle at s = 0.5 on a smooth bump
    {
        const auto bump = GridFunction::sample_interval(-1.0, 1.0, 512, [](double x) {
            const double u = 16.0 * x * x;
            return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0;
        });
        const auto T = t_operator(bump, 0.5);
        const auto O = t_operator_spectral_oracle(bump, 0.5);
        double cut = 0.0;
        for (double v : O.samples) cut = std::max(cut, std::abs(v));
        cut *= 1e-2;
        double sum = 0.0, sum2 = 0.0;
        int cnt = 0;
        CsvWriter tcsv;
        tcsv.header({"x", "direct", "oracle", "ratio"});
        for (int k = 0; k < bump.size(); ++k) {
            if (std::abs(O.samples[k]) < cut) continue;
            const double r = T.samples[k] / O.samples[k];
            sum += r;
            sum2 += r * r;
            ++cnt;
            tcsv.row({fmt_double(bump.x(k)), fmt_double(T.samples[k]), fmt_double(O.samples[k]),
                      fmt_double(r)});
        }
        const double mean = sum / cnt;
        const double sd = std::sqrt(std::max(0.0, sum2 / cnt - mean * mean));
        detail::add_check(res, "t_operator_constancy", sd / std::abs(mean) < 0.02,
                          sd / std::abs(mean), 0.02);
        detail::add_check(res, "t_operator_negative_sign", mean < 0.0, mean, 0.0);
        tcsv.save(out_dir + "/t_operator.csv");
        res.outputs.push_back("t_operator.csv");
    }
    return res;
}

// ---------------------------------------------------------------------------
// bmo: oscillation controlled by the windowed energy across amplitudes

inline SuiteResult suite_bmo(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"bmo"};
    const int N = cfg.get_int("bmo.N", 256);
    const double eps_vmo = cfg.get_double("bmo.eps_vmo", 5.0);

    CsvWriter csv;
    csv.header({"amplitude", "ratio", "window_energy", "applicable"});
    std::vector<double> ratios;
    for (double amp : {0.005, 0.01, 0.02}) {
        const auto sc = perturbed_circle_support(5, amp);
        const auto c = support_to_curve(sc, N, 1e-4);
        const double L = c.length();
        const auto vb = vmo_bound_check(c, 0.5, 2.0, {L / 32, L / 64, L / 128}, eps_vmo);
        ratios.push_back(vb.ratio);
        detail::add_check(res, "vmo_finite_amp_" + fmt_double(amp),
                          std::isfinite(vb.ratio) && vb.applicable, vb.ratio, eps_vmo);
        csv.row({fmt_double(amp), fmt_double(vb.ratio), fmt_double(vb.window_energy),
                 vb.applicable ? "1" : "0"});
    }
    double lo = ratios[0], hi = ratios[0];
    for (double r : ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    detail::add_check(res, "vmo_factor2_band", hi / lo <= 2.0, hi / lo, 2.0);
    csv.save(out_dir + "/bmo.csv");
    res.outputs.push_back("bmo.csv");
    return res;
}

// ---------------------------------------------------------------------------
// descent: circle stationarity and trace hygiene

inline SuiteResult suite_descent(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"descent"};
    const auto t0 = std::chrono::steady_clock::now();

    // fd gradient at the circle, modes k >= 2, N = 512
    {
        SupportCurve circ;
        circ.a0 = 1.0;
        circ.coeffs.assign(7, {0.0, 0.0});
        const auto g = fd_gradient(circ, 0.5, 512, 1e-4);
        double gn = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) gn += g[i] * g[i];
        gn = std::sqrt(gn);
        detail::add_check(res, "circle_stationarity", gn < 1e-5, gn, 1e-5);
    }

    const int seeds = cfg.get_int("descent.seeds", 5);
    const int N = cfg.get_int("descent.N", 256);
    CsvWriter csv;
    csv.header({"seed", "iter", "energy", "grad_norm", "step", "accepted"});
    for (int seed = 0; seed < seeds; ++seed) {
        DescentConfig dc;
        dc.s = 0.5;
        dc.K = 6;
        dc.N = N;
        dc.max_iters = cfg.get_int("descent.max_iters", 15);
        dc.grad_tol = 1e-4;
        dc.seed = static_cast<std::uint64_t>(seed);
        const auto init = random_support_curve(dc.seed, dc.K, 0.2);
        const auto trace = minimize_descent(dc, init);

        bool monotone = true;
        double prev = std::numeric_limits<double>::infinity();
        int iter = 0;
        for (const auto& st : trace.iterates) {
            if (st.accepted) {
                if (st.energy > prev * (1.0 + 1e-12)) monotone = false;
                prev = st.energy;
            }
            csv.row({std::to_string(seed), std::to_string(iter++), fmt_double(st.energy),
                     fmt_double(st.grad_norm), fmt_double(st.step_size),
                     st.accepted ? "1" : "0"});
        }
        const auto final_curve = support_to_curve(trace.final_shape, N, dc.eps_kappa);
        const bool convex = convexity_check(final_curve).is_convex;
        detail::add_check(res, "descent_monotone_seed_" + std::to_string(seed), monotone,
                          monotone ? 1.0 : 0.0, 1.0);
        detail::add_check(res, "descent_convex_final_seed_" + std::to_string(seed), convex,
                          convex ? 1.0 : 0.0, 1.0, "termination: " + trace.termination);
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::add_check(res, "descent_runtime_s", dt < 300.0, dt, 300.0);
    csv.save(out_dir + "/descent_trace.csv");
    res.outputs.push_back("descent_trace.csv");
    return res;
}

// ---------------------------------------------------------------------------
// sequences: lower semicontinuity and energy concentration

inline SuiteResult suite_sequences(const Config& cfg, const std::string& out_dir) {
    SuiteResult res{"sequences"};
    const int N = cfg.get_int("sequences.N", 512);
    const double s = 0.5;

    // lsc on the ellipse -> circle family
    {
        std::vector<ArcCurve> seq;
        for (double b : {0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) seq.push_back(ellipse_curve(N, 1.0, b));
        const auto limit = circle_curve(N);
        const auto lsc = lsc_check(seq, limit, s, 1e-4);
        detail::add_check(res, "lsc_ellipse_family", lsc.holds,
                          lsc.W_limit - lsc.liminf_proxy, 1e-4);
        CsvWriter csv;
        csv.header({"member", "energy"});
        for (std::size_t k = 0; k < lsc.sequence_energies.size(); ++k)
            csv.row({std::to_string(k), fmt_double(lsc.sequence_energies[k])});
        csv.row({"limit", fmt_double(lsc.W_limit)});
        csv.save(out_dir + "/lsc.csv");
        res.outputs.push_back("lsc.csv");
    }

    // concentration on the shrinking-fillet square family vs smooth family
    {
        const double eps = cfg.get_double("sequences.eps", 1.0);
        std::vector<ArcCurve> squares;
        for (double f : {0.10, 0.05, 0.025, 0.0125}) squares.push_back(rounded_square_curve(N, 1.0, f));
        const double Lsq = squares.back().length();
        const auto rep = concentration_scan(squares, s, eps, {Lsq / 16, Lsq / 32, Lsq / 64});
        detail::add_check(res, "concentration_square_4_points",
                          static_cast<int>(rep.points.size()) == 4,
                          static_cast<double>(rep.points.size()), 4.0);
        detail::add_check(res, "concentration_covering_bound", rep.bound_holds,
                          static_cast<double>(rep.points.size()),
                          static_cast<double>(rep.covering_bound));

        std::vector<ArcCurve> smooth;
        for (double b : {0.6, 0.7, 0.8, 0.9}) smooth.push_back(ellipse_curve(N, 1.0, b));
        const double Lel = smooth.back().length();
        const auto rep2 = concentration_scan(smooth, s, eps, {Lel / 16, Lel / 32, Lel / 64});
        detail::add_check(res, "concentration_smooth_empty", rep2.points.empty(),
                          static_cast<double>(rep2.points.size()), 0.0);

        CsvWriter csv;
        csv.header({"family", "arc_position", "worst_local_energy"});
        for (const auto& p : rep.points)
            csv.row({"square", fmt_double(p.arc_position), fmt_double(p.worst_local_energy)});
        for (const auto& p : rep2.points)
            csv.row({"smooth", fmt_double(p.arc_position), fmt_double(p.worst_local_energy)});
        csv.save(out_dir + "/concentration.csv");
        res.outputs.push_back("concentration.csv");
    }
    return res;
}

// ---------------------------------------------------------------------------
// registry

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"scaling",   "oracle",  "maxprinciple",
                                                "corners",   "sobolev", "bmo",
                                                "descent",   "sequences"};
    return names;
}

inline SuiteResult run_suite(const std::string& name, const Config& cfg,
                             const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult res;
    if (name == "scaling")
        res = suite_scaling(cfg, out_dir);
    else if (name == "oracle")
        res = suite_oracle(cfg, out_dir);
    else if (name == "maxprinciple")
        res = suite_maxprinciple(cfg, out_dir);
    else if (name == "corners")
        res = suite_corners(cfg, out_dir);
    else if (name == "sobolev")
        res = suite_sobolev(cfg, out_dir);
    else if (name == "bmo")
        res = suite_bmo(cfg, out_dir);
    else if (name == "descent")
        res = suite_descent(cfg, out_dir);
    else if (name == "sequences")
        res = suite_sequences(cfg, out_dir);
    else
        throw parameter_error("unknown suite: " + name);
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace fracwill
