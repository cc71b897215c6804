// fracwill — fractional mean curvature and nonlocal Willmore energy toolkit
//
// Subcommands: nmc, energy, seminorm, stein, toper, minimize, diagnose,
// suite, plotdata. Exit codes: 0 success, 1 check failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracwill/curvature.hpp"
#include "fracwill/energy.hpp"
#include "fracwill/fracops.hpp"
#include "fracwill/io.hpp"
#include "fracwill/minimize.hpp"
#include "fracwill/region.hpp"
#include "fracwill/suites.hpp"
#include "fracwill/version.hpp"

namespace fs = std::filesystem;
using namespace fracwill;

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

std::optional<ArcWindow> parse_window(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw parameter_error("window must be 'a,b' in arc length");
    return ArcWindow{std::stod(spec.substr(0, comma)), std::stod(spec.substr(comma + 1))};
}

// minimal '*' wildcard match for --curves globs
bool wildcard_match(const std::string& pat, const std::string& str) {
    std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
    while (s < str.size()) {
        if (p < pat.size() && (pat[p] == str[s])) {
            ++p;
            ++s;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    fs::path pat(pattern);
    const fs::path dir = pat.has_parent_path() ? pat.parent_path() : fs::path(".");
    const std::string leaf = pat.filename().string();
    std::vector<std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && wildcard_match(leaf, e.path().filename().string()))
            out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_nmc(const std::string& curve_file, double s, const std::string& method, int N,
            const std::string& out_file, double grid_h) {
    const ArcCurve c = load_curve(curve_file, N);
    CsvWriter csv;
    csv.header({"node_index", "arc_param", "H_s", "method", "delta"});
    if (method == "boundary") {
        const auto H = nmc_boundary_all(c, s);
        for (int i = 0; i < c.size(); ++i)
            csv.row({std::to_string(i), fmt_double(c.arc(i)), fmt_double(H.values[i]), "boundary",
                     fmt_double(H.near_diag_cutoff)});
    } else if (method == "region") {
        const auto region = RegionSpec::curve_interior(c);
        const int stride = std::max(1, c.size() / 32);
        for (int i = 0; i < c.size(); i += stride) {
            const auto oc = nmc_region_oracle(region, c.nodes[i], s, grid_h);
            csv.row({std::to_string(i), fmt_double(c.arc(i)), fmt_double(oc.value), "region",
                     fmt_double(grid_h)});
        }
    } else {
        throw parameter_error("method must be boundary or region");
    }
    csv.save(out_file);
    return 0;
}

int cmd_energy(const std::string& curve_file, double s, double p, bool critical, int N,
               const std::string& outer, const std::string& inner, bool absolute,
               const std::string& out_file) {
    const ArcCurve c = load_curve(curve_file, N);
    const FracParams params = critical ? FracParams::critical(s) : FracParams(s, p);
    const auto e = willmore_energy(c, params, parse_window(outer), parse_window(inner), absolute);
    json j;
    j["total"] = e.total;
    j["total_pow_s"] = e.pow_s();
    j["total_pow_1p"] = e.pow_1p();
    j["s"] = params.s;
    j["p"] = params.p;
    j["critical"] = params.is_critical();
    j["absolute"] = e.absolute;
    j["N"] = c.size();
    j["delta"] = e.delta;
    j["spacing"] = c.spacing;
    json inner_vals = json::array();
    for (std::size_t k = 0; k < e.inner.size(); ++k)
        inner_vals.push_back({e.outer_nodes[k], e.inner[k]});
    j["inner"] = std::move(inner_vals);
    write_text_file(out_file, j.dump(1));
    return 0;
}

int cmd_minimize(const std::string& config_file, const std::string& out_dir,
                 const std::string& cmdline) {
    const auto t0 = std::chrono::steady_clock::now();
    const Config cfg = Config::load(config_file);
    DescentConfig dc;
    dc.s = cfg.get_double("s", dc.s);
    dc.K = cfg.get_int("K", dc.K);
    dc.N = cfg.get_int("N", dc.N);
    dc.step0 = cfg.get_double("step0", dc.step0);
    dc.shrink = cfg.get_double("shrink", dc.shrink);
    dc.grow = cfg.get_double("grow", dc.grow);
    dc.max_iters = cfg.get_int("max_iters", dc.max_iters);
    dc.grad_tol = cfg.get_double("grad_tol", dc.grad_tol);
    dc.eps_kappa = cfg.get_double("eps_kappa", dc.eps_kappa);
    dc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    const double amp = cfg.get_double("init_amplitude", 0.2);

    fs::create_directories(out_dir);
    const auto init = random_support_curve(dc.seed, dc.K, amp);
    const auto trace = minimize_descent(dc, init);

    CsvWriter csv;
    csv.header({"iter", "energy", "grad_norm", "step", "accepted"});
    int iter = 0, accepted_idx = 0;
    RunManifest man;
    for (const auto& st : trace.iterates) {
        csv.row({std::to_string(iter++), fmt_double(st.energy), fmt_double(st.grad_norm),
                 fmt_double(st.step_size), st.accepted ? "1" : "0"});
        if (st.accepted) {
            const std::string f = "iterate_" + std::to_string(accepted_idx++) + ".json";
            save_support_curve(st.shape, out_dir + "/" + f);
            man.outputs.push_back(f);
        }
    }
    csv.save(out_dir + "/trace.csv");
    man.outputs.push_back("trace.csv");

    json tj;
    tj["termination"] = trace.termination;
    tj["final_energy"] = trace.final_energy;
    tj["iterates"] = trace.iterates.size();
    write_text_file(out_dir + "/trace.json", tj.dump(1));
    man.outputs.push_back("trace.json");
    save_support_curve(trace.final_shape, out_dir + "/final.json");
    man.outputs.push_back("final.json");

    man.command_line = cmdline;
    man.config_snapshot = cfg.to_json();
    man.version = kVersion;
    man.seeds = {dc.seed};
    man.input_digests[config_file] = file_digest(config_file);
    man.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(out_dir + "/manifest.json", man.to_json(out_dir).dump(1));
    std::printf("minimize: %zu iterates, final energy %.12g, termination %s\n",
                trace.iterates.size(), trace.final_energy, trace.termination.c_str());
    return 0;
}

int cmd_suite(const std::string& name, const std::string& config_file, const std::string& out_dir,
              const std::string& cmdline) {
    const auto t0 = std::chrono::steady_clock::now();
    Config cfg;
    if (!config_file.empty()) cfg = Config::load(config_file);
    const auto res = run_suite(name, cfg, out_dir);

    RunManifest man;
    man.command_line = cmdline;
    man.config_snapshot = cfg.to_json();
    man.version = kVersion;
    man.outputs = res.outputs;
    man.checks = res.checks;
    if (!config_file.empty()) man.input_digests[config_file] = file_digest(config_file);
    man.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(out_dir + "/manifest_" + name + ".json", man.to_json(out_dir).dump(1));

    for (const auto& c : res.checks)
        std::printf("[%s] %s (measured %.6g, threshold %.6g)%s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.threshold,
                    c.detail.empty() ? "" : ("  " + c.detail).c_str());
    std::printf("suite %s: %s (%.1fs)\n", name.c_str(), res.all_pass() ? "PASS" : "FAIL",
                res.wall_time_s);
    return res.all_pass() ? 0 : 1;
}

int cmd_plotdata(const std::string& kind, const std::string& in_file,
                 const std::string& out_file) {
    std::ifstream in(in_file);
    if (!in) throw parameter_error("plotdata: cannot open " + in_file);
    std::ostringstream out;
    if (kind == "corner") {
        // corner_profile.csv -> (log dist, log H) per s
        std::string line;
        std::getline(in, line);  // header
        out << "# log10(probe_dist)  log10(|H|)  s\n";
        while (std::getline(in, line)) {
            double s, d, H;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &d, &H) == 3)
                out << fmt_double(std::log10(d)) << " " << fmt_double(std::log10(std::abs(H)))
                    << " " << fmt_double(s) << "\n";
        }
    } else if (kind == "descent") {
        // trace.csv -> (iter, energy) for accepted steps
        std::string line;
        std::getline(in, line);
        out << "# iter  energy\n";
        while (std::getline(in, line)) {
            double it, e, gn, st;
            int acc;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &it, &e, &gn, &st, &acc) == 5 &&
                acc == 1)
                out << fmt_double(it) << " " << fmt_double(e) << "\n";
        }
    } else if (kind == "refinement") {
        // dichotomy.csv -> (N, E_p2, E_p1)
        std::string line;
        std::getline(in, line);
        out << "# N  E_critical  E_supercritical\n";
        while (std::getline(in, line)) {
            double N, e2, e1;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &N, &e2, &e1) == 3)
                out << fmt_double(N) << " " << fmt_double(e2) << " " << fmt_double(e1) << "\n";
        }
    } else {
        throw parameter_error("plotdata kind must be corner, descent, or refinement");
    }
    write_text_file(out_file, out.str());
    // gnuplot stub alongside
    std::ostringstream gp;
    gp << "# gnuplot stub\nplot '" << out_file << "' using 1:2 with linespoints\n";
    write_text_file(out_file + ".gp", gp.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional mean curvature / nonlocal Willmore energy toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    const std::string cmdline = join_args(argc, argv);

    // nmc
    auto* nmc = app.add_subcommand("nmc", "fractional mean curvature along a curve");
    std::string nmc_curve, nmc_method = "boundary", nmc_out = "nmc.csv";
    double nmc_s = 0.5, nmc_h = 1.0 / 400.0;
    int nmc_N = 0;
    nmc->add_option("--curve", nmc_curve)->required();
    nmc->add_option("--s", nmc_s);
    nmc->add_option("--method", nmc_method)->check(CLI::IsMember({"boundary", "region"}));
    nmc->add_option("--n", nmc_N);
    nmc->add_option("--grid-h", nmc_h);
    nmc->add_option("--out", nmc_out);

    // energy
    auto* energy = app.add_subcommand("energy", "nonlocal Willmore energy");
    std::string en_curve, en_outer, en_inner, en_out = "energy.json";
    double en_s = 0.5, en_p = 2.0;
    bool en_critical = false, en_abs = false;
    int en_N = 0;
    energy->add_option("--curve", en_curve)->required();
    energy->add_option("--s", en_s);
    energy->add_option("--p", en_p);
    energy->add_flag("--critical", en_critical);
    energy->add_option("--outer", en_outer);
    energy->add_option("--inner", en_inner);
    energy->add_flag("--absolute", en_abs);
    energy->add_option("--n", en_N);
    energy->add_option("--out", en_out);

    // seminorm / stein / toper
    auto* semi = app.add_subcommand("seminorm", "Gagliardo seminorm with inner L2");
    std::string fn_file;
    double semi_t = 0.5, semi_p = 2.0;
    semi->add_option("--fn", fn_file)->required();
    semi->add_option("--t", semi_t);
    semi->add_option("--p", semi_p);

    auto* stein = app.add_subcommand("stein", "seminorm / fractional-Laplacian norm ratio");
    std::string stein_file;
    double stein_s = 0.5;
    stein->add_option("--fn", stein_file)->required();
    stein->add_option("--s", stein_s);

    auto* toper = app.add_subcommand("toper", "tangent-subtracted potential operator");
    std::string toper_file, toper_out;
    double toper_s = 0.5;
    toper->add_option("--fn", toper_file)->required();
    toper->add_option("--s", toper_s);
    toper->add_option("--out", toper_out);

    // minimize
    auto* mini = app.add_subcommand("minimize", "convexity-constrained critical-energy descent");
    std::string mini_config, mini_out = "descent_out";
    mini->add_option("--config", mini_config)->required();
    mini->add_option("--out", mini_out);

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "sequence diagnostics");
    std::string diag_what, diag_glob, diag_limit;
    double diag_s = 0.5, diag_eps = 1.0;
    int diag_N = 512;
    diag->add_option("what", diag_what)->check(CLI::IsMember({"lsc", "concentration"}))->required();
    diag->add_option("--curves", diag_glob)->required();
    diag->add_option("--limit", diag_limit);
    diag->add_option("--s", diag_s);
    diag->add_option("--eps", diag_eps);
    diag->add_option("--n", diag_N);

    // suite
    auto* suite = app.add_subcommand("suite", "verification suites");
    std::string suite_name, suite_config, suite_out = "suite_out";
    suite->add_option("name", suite_name)->required();
    suite->add_option("--config", suite_config);
    suite->add_option("--out", suite_out);

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "gnuplot-ready column data from results");
    std::string plot_kind, plot_in, plot_out = "plot.dat";
    plot->add_option("kind", plot_kind)->required();
    plot->add_option("--in", plot_in)->required();
    plot->add_option("--out", plot_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors -> 2, --help/--version -> 0
    }

    try {
        if (*nmc) return cmd_nmc(nmc_curve, nmc_s, nmc_method, nmc_N, nmc_out, nmc_h);
        if (*energy)
            return cmd_energy(en_curve, en_s, en_p, en_critical, en_N, en_outer, en_inner, en_abs,
                              en_out);
        if (*semi) {
            const auto f = load_grid_function(fn_file);
            const auto r = gagliardo_seminorm(f, semi_t, semi_p);
            std::printf("seminorm t=%g p=%g: %.12g%s\n", semi_t, semi_p, r.value,
                        r.graded_flagged ? " (near-diagonal handled by derivative model)" : "");
            return 0;
        }
        if (*stein) {
            const auto f = load_grid_function(stein_file);
            std::printf("stein ratio s=%g: %.12g\n", stein_s, stein_ratio(f, stein_s));
            return 0;
        }
        if (*toper) {
            const auto f = load_grid_function(toper_file);
            const auto T = t_operator(f, toper_s);
            if (!toper_out.empty()) save_grid_function(T, toper_out);
            double mx = 0.0;
            for (double v : T.samples) mx = std::max(mx, std::abs(v));
            std::printf("toper s=%g: max |Tf| = %.12g%s\n", toper_s, mx,
                        toper_out.empty() ? "" : (", written to " + toper_out).c_str());
            return 0;
        }
        if (*mini) return cmd_minimize(mini_config, mini_out, cmdline);
        if (*diag) {
            const auto files = expand_glob(diag_glob);
            if (files.size() < 2) throw parameter_error("diagnose: glob matched < 2 curves");
            std::vector<ArcCurve> seq;
            for (const auto& f : files) seq.push_back(load_curve(f, diag_N));
            if (diag_what == "lsc") {
                const ArcCurve limit =
                    diag_limit.empty() ? seq.back() : load_curve(diag_limit, diag_N);
                const auto r = lsc_check(seq, limit, diag_s);
                std::printf("lsc: W_limit=%.12g liminf_proxy=%.12g holds=%d\n", r.W_limit,
                            r.liminf_proxy, r.holds ? 1 : 0);
                return r.holds ? 0 : 1;
            }
            const double L = seq.back().length();
            const auto rep = concentration_scan(seq, diag_s, diag_eps, {L / 16, L / 32, L / 64});
            std::printf("concentration: %zu points, Lambda=%.6g, bound=%d, bound_holds=%d\n",
                        rep.points.size(), rep.Lambda, rep.covering_bound, rep.bound_holds ? 1 : 0);
            for (const auto& p : rep.points)
                std::printf("  arc %.6g (worst local energy %.6g)\n", p.arc_position,
                            p.worst_local_energy);
            return rep.bound_holds ? 0 : 1;
        }
        if (*suite) return cmd_suite(suite_name, suite_config, suite_out, cmdline);
        if (*plot) return cmd_plotdata(plot_kind, plot_in, plot_out);
    } catch (const parameter_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
