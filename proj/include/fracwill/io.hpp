#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwill/curve.hpp"
#include "fracwill/fracops.hpp"
#include "fracwill/support_curve.hpp"

namespace fracwill {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// number formatting (deterministic, round-trip exact)

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// FNV-1a digest of file bytes

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parameter_error("file_digest: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_hex(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parameter_error("write_text_file: cannot open " + path);
    out << body;
}

// ---------------------------------------------------------------------------
// curve files: { "kind": "arc"|"support"|"polyline", ... }

inline void save_curve(const ArcCurve& c, const std::string& path) {
    json j;
    j["kind"] = "arc";
    j["closed"] = c.closed;
    json nodes = json::array();
    for (const Vec2& p : c.nodes) nodes.push_back({p.x, p.y});
    j["nodes"] = std::move(nodes);
    write_text_file(path, j.dump(1));
}

inline void save_support_curve(const SupportCurve& sc, const std::string& path) {
    json j;
    j["kind"] = "support";
    j["a0"] = sc.a0;
    json coeffs = json::array();
    for (std::size_t i = 0; i < sc.coeffs.size(); ++i)
        coeffs.push_back({static_cast<int>(i + 2), sc.coeffs[i].first, sc.coeffs[i].second});
    j["coeffs"] = std::move(coeffs);
    write_text_file(path, j.dump(1));
}

/// Loads any curve file; polyline and support kinds need N to realize an
/// ArcCurve. "arc" nodes are taken as already uniform.
inline ArcCurve load_curve(const std::string& path, int N = 0) {
    std::ifstream in(path);
    if (!in) throw parameter_error("load_curve: cannot open " + path);
    json j = json::parse(in);
    const std::string kind = j.value("kind", "polyline");
    const bool closed = j.value("closed", true);
    if (kind == "support") {
        SupportCurve sc;
        sc.a0 = j.at("a0").get<double>();
        int max_k = 1;
        for (const auto& row : j.at("coeffs")) max_k = std::max(max_k, row.at(0).get<int>());
        if (max_k >= 2) sc.coeffs.assign(max_k - 1, {0.0, 0.0});
        for (const auto& row : j.at("coeffs")) {
            const int k = row.at(0).get<int>();
            if (k < 2) throw parameter_error("load_curve: support mode k must be >= 2");
            sc.coeffs[k - 2] = {row.at(1).get<double>(), row.at(2).get<double>()};
        }
        return support_to_curve(sc, N > 0 ? N : 512);
    }
    std::vector<Vec2> pts;
    for (const auto& row : j.at("nodes")) pts.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
    if (kind == "arc") {
        ArcCurve c;
        c.closed = closed;
        c.nodes = std::move(pts);
        c.spacing = polyline_length(c.nodes, closed) / (closed ? c.size() : c.size() - 1);
        return tangent_normal(std::move(c));
    }
    return make_arc_curve(pts, N > 0 ? N : static_cast<int>(pts.size()), closed);
}

// ---------------------------------------------------------------------------
// function files: { "domain": "circle" | [a, b], "samples": [...] }

inline GridFunction load_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("load_grid_function: cannot open " + path);
    json j = json::parse(in);
    std::vector<double> samples = j.at("samples").get<std::vector<double>>();
    const auto& dom = j.at("domain");
    if (dom.is_string() && dom.get<std::string>() == "circle")
        return GridFunction::on_circle(std::move(samples));
    return GridFunction::on_interval(dom.at(0).get<double>(), dom.at(1).get<double>(),
                                     std::move(samples));
}

inline void save_grid_function(const GridFunction& f, const std::string& path) {
    json j;
    if (f.domain == GridFunction::Domain::circle)
        j["domain"] = "circle";
    else
        j["domain"] = {f.a, f.b};
    j["samples"] = f.samples;
    write_text_file(path, j.dump(1));
}

// ---------------------------------------------------------------------------
// CSV (fixed formatting so reruns are byte-identical)

struct CsvWriter {
    std::ostringstream body;

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) body << (i ? "," : "") << cols[i];
        body << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) body << (i ? "," : "") << cells[i];
        body << "\n";
    }
    void save(const std::string& path) const { write_text_file(path, body.str()); }
};

// ---------------------------------------------------------------------------
// plain-text key=value config

struct Config {
    std::map<std::string, std::string> kv;

    static Config load(const std::string& path) {
        Config c;
        std::ifstream in(path);
        if (!in) throw parameter_error("Config: cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (!key.empty()) c.kv[key] = val;
        }
        return c;
    }

    std::string get(const std::string& key, const std::string& dflt) const {
        const auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    }
    double get_double(const std::string& key, double dflt) const {
        const auto it = kv.find(key);
        return it == kv.end() ? dflt : std::stod(it->second);
    }
    int get_int(const std::string& key, int dflt) const {
        const auto it = kv.find(key);
        return it == kv.end() ? dflt : std::stoi(it->second);
    }

    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : kv) j[k] = v;
        return j;
    }
};

// ---------------------------------------------------------------------------
// run manifest

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct RunManifest {
    std::string command_line;
    json config_snapshot = json::object();
    std::string version;
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> input_digests;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    json to_json(const std::string& base_dir) const {
        json j;
        j["command_line"] = command_line;
        j["config"] = config_snapshot;
        j["version"] = version;
        j["seeds"] = seeds;
        j["input_digests"] = input_digests;
        json outs = json::array();
        for (const auto& o : outputs) {
            json e;
            e["file"] = o;
            e["digest"] = file_digest(base_dir.empty() ? o : base_dir + "/" + o);
            outs.push_back(e);
        }
        j["outputs"] = std::move(outs);
        j["wall_time_s"] = wall_time_s;
        json cs = json::array();
        for (const auto& c : checks) {
            json e;
            e["name"] = c.name;
            e["pass"] = c.pass;
            e["measured"] = c.measured;
            e["threshold"] = c.threshold;
            if (!c.detail.empty()) e["detail"] = c.detail;
            cs.push_back(e);
        }
        j["checks"] = std::move(cs);
        j["all_pass"] = all_pass();
        return j;
    }
};

}  // namespace fracwill
