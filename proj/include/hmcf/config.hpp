#pragma once

// Line-oriented `key = value` configuration files. Keys mirror the RunConfig
// field names, dotted for nesting; composite values (circles, per-noise
// arrays) are comma lists. parse/serialize round-trip exactly.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"

namespace hmcf {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] inline void cfg_fail(int line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

inline double cfg_double(const std::string& v, int line) {
    const char* s = v.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    if (end == s || *end != '\0') cfg_fail(line, "expected a number, got '" + v + "'");
    if (!std::isfinite(x)) cfg_fail(line, "non-finite value '" + v + "'");
    return x;
}

inline long long cfg_int(const std::string& v, int line) {
    const char* s = v.c_str();
    char* end = nullptr;
    long long x = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0') cfg_fail(line, "expected an integer, got '" + v + "'");
    return x;
}

inline std::uint64_t cfg_uint(const std::string& v, int line) {
    const char* s = v.c_str();
    char* end = nullptr;
    if (!v.empty() && v[0] == '-') cfg_fail(line, "expected a non-negative integer, got '" + v + "'");
    unsigned long long x = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') cfg_fail(line, "expected an integer, got '" + v + "'");
    return x;
}

inline bool cfg_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    cfg_fail(line, "expected true/false, got '" + v + "'");
}

inline std::vector<double> cfg_list(const std::string& v, int line) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(cfg_double(trim(item), line));
    if (!v.empty() && v.back() == ',') cfg_fail(line, "trailing comma in '" + v + "'");
    return out;
}

inline CircleSpec cfg_circle(const std::string& v, int line) {
    std::vector<double> xs = cfg_list(v, line);
    if (xs.size() != 3) cfg_fail(line, "circle needs cx,cy,r");
    if (xs[2] <= 0.0) cfg_fail(line, "circle radius must be positive");
    return CircleSpec{xs[0], xs[1], xs[2]};
}

template <std::size_t N>
inline std::array<double, N> cfg_array(const std::string& v, int line) {
    std::vector<double> xs = cfg_list(v, line);
    if (xs.size() != N) cfg_fail(line, "expected " + std::to_string(N) + " comma-separated values");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = xs[i];
    return out;
}

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    using namespace detail;
    RunConfig c;
    bool have_model = false;
    std::vector<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) cfg_fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) cfg_fail(line, "empty key");
        if (val.empty()) cfg_fail(line, "empty value for '" + key + "'");
        for (const std::string& k : seen)
            if (k == key) cfg_fail(line, "duplicate key '" + key + "'");
        seen.push_back(key);

        auto pos_double = [&](const char* what) {
            double x = cfg_double(val, line);
            if (x <= 0.0) cfg_fail(line, std::string(what) + " must be positive");
            return x;
        };
        auto nonneg_double = [&](const char* what) {
            double x = cfg_double(val, line);
            if (x < 0.0) cfg_fail(line, std::string(what) + " must be non-negative");
            return x;
        };

        if (key == "model") {
            try {
                c.model = model_kind_from_string(val);
            } catch (const std::invalid_argument& e) {
                cfg_fail(line, e.what());
            }
            have_model = true;
        } else if (key == "wave.b") {
            c.wave.b = pos_double("wave.b");
        } else if (key == "wave.tau") {
            c.wave.tau = pos_double("wave.tau");
        } else if (key == "wave.substeps") {
            long long n = cfg_int(val, line);
            if (n < 0) cfg_fail(line, "wave.substeps must be non-negative");
            c.wave.substeps = static_cast<int>(n);
        } else if (key == "wave.eta") {
            double x = cfg_double(val, line);
            if (x < 0.5 || x > 1.0) cfg_fail(line, "wave.eta must lie in [0.5, 1]");
            c.wave.eta = x;
        } else if (key == "modelp.lambda") {
            c.modelp.lambda = cfg_double(val, line);
        } else if (key == "modelp.mu") {
            c.modelp.mu = nonneg_double("modelp.mu");
        } else if (key == "modelp.gamma") {
            c.modelp.gamma = nonneg_double("modelp.gamma");
        } else if (key == "modelp.u") {
            c.modelp.u = cfg_double(val, line);
        } else if (key == "modelp.sigma") {
            c.modelp.sigma = pos_double("modelp.sigma");
        } else if (key == "modelp.n_threshold") {
            double x = cfg_double(val, line);
            if (x <= 0.0 || x >= 1.0) cfg_fail(line, "modelp.n_threshold must lie in (0, 1)");
            c.modelp.n_threshold = x;
        } else if (key == "modelp.window") {
            long long n = cfg_int(val, line);
            if (n < 0) cfg_fail(line, "modelp.window must be non-negative");
            if (n > 0 && (n % 2 == 0 || n < 3)) cfg_fail(line, "modelp.window must be odd and >= 3");
            c.modelp.window = static_cast<int>(n);
        } else if (key == "reg.epsilon") {
            c.reg.epsilon = pos_double("reg.epsilon");
        } else if (key == "reg.alpha") {
            c.reg.alpha = pos_double("reg.alpha");
        } else if (key == "edge.sigma_g") {
            c.edge.sigma_g = pos_double("edge.sigma_g");
        } else if (key == "edge.amplitude") {
            c.edge.amplitude = pos_double("edge.amplitude");
        } else if (key == "edge.exponent") {
            c.edge.exponent = pos_double("edge.exponent");
        } else if (key == "reinit_every") {
            long long n = cfg_int(val, line);
            if (n < 0) cfg_fail(line, "reinit_every must be non-negative");
            c.reinit_every = static_cast<int>(n);
        } else if (key == "max_iters") {
            long long n = cfg_int(val, line);
            if (n < 1) cfg_fail(line, "max_iters must be at least 1");
            c.max_iters = static_cast<int>(n);
        } else if (key == "conv_window") {
            long long n = cfg_int(val, line);
            if (n < 1) cfg_fail(line, "conv_window must be at least 1");
            c.conv_window = static_cast<int>(n);
        } else if (key == "conv_threshold") {
            c.conv_threshold = pos_double("conv_threshold");
        } else if (key == "init.circle") {
            c.init.circle = cfg_circle(val, line);
        } else if (key == "init.circle2") {
            c.init.circle2 = cfg_circle(val, line);
        } else if (key == "init.mask") {
            c.init.mask_path = val;
        } else if (key == "seed") {
            c.seed = cfg_uint(val, line);
        } else if (key == "allow_vanish") {
            c.allow_vanish = cfg_bool(val, line);
        } else if (key == "vmax") {
            c.vmax = nonneg_double("vmax");
        } else if (key == "bench.strength") {
            c.bench.strength = cfg_array<4>(val, line);
            for (double x : c.bench.strength)
                if (x < 0.0) cfg_fail(line, "bench.strength entries must be non-negative");
        } else if (key == "bench.hmcf_b") {
            c.bench.hmcf_b = cfg_array<4>(val, line);
            for (double x : c.bench.hmcf_b)
                if (x <= 0.0) cfg_fail(line, "bench.hmcf_b entries must be positive");
        } else if (key == "bench.pmcf_mu") {
            c.bench.pmcf_mu = cfg_array<4>(val, line);
            for (double x : c.bench.pmcf_mu)
                if (x < 0.0) cfg_fail(line, "bench.pmcf_mu entries must be non-negative");
        } else if (key == "bench.grid") {
            long long n = cfg_int(val, line);
            if (n < 64) cfg_fail(line, "bench.grid must be at least 64");
            c.bench.grid = static_cast<int>(n);
        } else if (key == "bench.max_iters") {
            long long n = cfg_int(val, line);
            if (n < 0) cfg_fail(line, "bench.max_iters must be non-negative");
            c.bench.max_iters = static_cast<int>(n);
        } else {
            cfg_fail(line, "unknown key '" + key + "'");
        }
    }
    if (!have_model) throw config_error("config: required key 'model' is missing");
    return c;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

inline std::string serialize_config(const RunConfig& c) {
    using detail::fmt_g17;
    std::string out;
    auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    auto list4 = [&](const std::array<double, 4>& a) {
        return fmt_g17(a[0]) + "," + fmt_g17(a[1]) + "," + fmt_g17(a[2]) + "," + fmt_g17(a[3]);
    };
    kv("model", model_kind_name(c.model));
    kv("wave.b", fmt_g17(c.wave.b));
    kv("wave.tau", fmt_g17(c.wave.tau));
    kv("wave.substeps", std::to_string(c.wave.substeps));
    kv("wave.eta", fmt_g17(c.wave.eta));
    kv("modelp.lambda", fmt_g17(c.modelp.lambda));
    kv("modelp.mu", fmt_g17(c.modelp.mu));
    kv("modelp.gamma", fmt_g17(c.modelp.gamma));
    kv("modelp.u", fmt_g17(c.modelp.u));
    kv("modelp.sigma", fmt_g17(c.modelp.sigma));
    kv("modelp.n_threshold", fmt_g17(c.modelp.n_threshold));
    kv("modelp.window", std::to_string(c.modelp.window));
    kv("reg.epsilon", fmt_g17(c.reg.epsilon));
    kv("reg.alpha", fmt_g17(c.reg.alpha));
    kv("edge.sigma_g", fmt_g17(c.edge.sigma_g));
    kv("edge.amplitude", fmt_g17(c.edge.amplitude));
    kv("edge.exponent", fmt_g17(c.edge.exponent));
    kv("reinit_every", std::to_string(c.reinit_every));
    kv("max_iters", std::to_string(c.max_iters));
    kv("conv_window", std::to_string(c.conv_window));
    kv("conv_threshold", fmt_g17(c.conv_threshold));
    if (c.init.circle)
        kv("init.circle", fmt_g17(c.init.circle->cx) + "," + fmt_g17(c.init.circle->cy) + "," +
                              fmt_g17(c.init.circle->r));
    if (c.init.circle2)
        kv("init.circle2", fmt_g17(c.init.circle2->cx) + "," + fmt_g17(c.init.circle2->cy) + "," +
                               fmt_g17(c.init.circle2->r));
    if (!c.init.mask_path.empty()) kv("init.mask", c.init.mask_path);
    kv("seed", std::to_string(c.seed));
    kv("allow_vanish", c.allow_vanish ? "true" : "false");
    kv("vmax", fmt_g17(c.vmax));
    kv("bench.strength", list4(c.bench.strength));
    kv("bench.hmcf_b", list4(c.bench.hmcf_b));
    kv("bench.pmcf_mu", list4(c.bench.pmcf_mu));
    kv("bench.grid", std::to_string(c.bench.grid));
    kv("bench.max_iters", std::to_string(c.bench.max_iters));
    return out;
}

}  // namespace hmcf
