// Acceptance suite: runs every verification suite and reports one
// pass/fail line per criterion. Exit code 0 iff all criteria pass.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fracwill/io.hpp"
#include "fracwill/suites.hpp"

using namespace fracwill;

namespace {

struct Criterion {
    std::string label;
    std::string suite;
    std::vector<std::string> prefixes;  // checks whose name starts with any of these count
};

bool starts_with_any(const std::string& name, const std::vector<std::string>& prefixes) {
    for (const auto& p : prefixes)
        if (name.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main() {
    const std::string out_dir = "acceptance_out";
    Config cfg;  // suite defaults carry the pinned parameters

    const std::vector<Criterion> criteria = {
        {"criterion 01 critical scaling invariance", "scaling",
         {"critical_invariance_", "critical_runtime_s"}},
        {"criterion 02 subcritical scaling exponent", "scaling",
         {"subcritical_slope_", "subcritical_runtime_s"}},
        {"criterion 03 boundary vs region oracle", "oracle",
         {"disk_agreement_", "ellipse_agreement_", "oracle_runtime_s"}},
        {"criterion 04 half-plane zero", "oracle", {"halfplane_zero_"}},
        {"criterion 05 maximum principle + convex positivity", "maxprinciple",
         {"nested_disks_", "outer_disk_", "convex_positivity_"}},
        {"criterion 06 corner blow-up rate", "corners",
         {"corner_exponent_", "corner_fit_runtime_s"}},
        {"criterion 07 critical/supercritical dichotomy", "corners",
         {"critical_divergence_", "supercritical_shrink_", "dichotomy_runtime_s"}},
        {"criterion 08 Stein equivalence witness", "sobolev", {"stein_"}},
        {"criterion 09 T-operator identity", "sobolev", {"t_operator_"}},
        {"criterion 10 BMO control", "bmo", {"vmo_"}},
        {"criterion 11 circle stationarity + descent hygiene", "descent",
         {"circle_stationarity", "descent_"}},
        {"criterion 12 sequence diagnostics", "sequences",
         {"lsc_", "concentration_"}},
    };

    std::map<std::string, SuiteResult> results;
    for (const auto& name : suite_names()) {
        std::printf("running suite %s ...\n", name.c_str());
        std::fflush(stdout);
        results[name] = run_suite(name, cfg, out_dir);
        std::printf("  done in %.1fs\n", results[name].wall_time_s);
        std::fflush(stdout);
    }

    int failures = 0;
    std::printf("\n");
    for (const auto& crit : criteria) {
        const auto& suite = results.at(crit.suite);
        bool pass = true;
        std::vector<const CheckResult*> failed;
        for (const auto& c : suite.checks) {
            if (!starts_with_any(c.name, crit.prefixes)) continue;
            if (!c.pass) {
                pass = false;
                failed.push_back(&c);
            }
        }
        std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", crit.label.c_str());
        for (const auto* c : failed)
            std::printf("        %s: measured %.6g vs threshold %.6g%s%s\n", c->name.c_str(),
                        c->measured, c->threshold, c->detail.empty() ? "" : " -- ",
                        c->detail.c_str());
        if (!pass) ++failures;
    }

    std::printf("\n%d of %zu criteria passed\n",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
