/*
 * run_config.hpp - resolved settings for the kerr command line.
 *
 * Settings come from a flat "key = value" file ('#' starts a comment) and
 * from command-line flags with the same names; flags win. Every value passes
 * through the same string parser, so a bad flag and a bad file line produce
 * the same diagnostics.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "kerr/errors.hpp"
#include "kerr/kerr_moyal.hpp"
#include "kerr/quantum_states.hpp"

namespace kerr {

struct Setting {
    std::string value;
    std::string origin;  ///< "file:line" or "--flag", for diagnostics
};

using SettingMap = std::map<std::string, Setting>;

using ConfigValue = std::variant<double, long long, bool, std::string, std::vector<double>>;
using ConfigEntries = std::vector<std::pair<std::string, ConfigValue>>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const Setting& st, const std::string& key) {
    const std::string v = trim(st.value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(st.origin + ": " + key + ": expected a finite number, got '" + st.value + "'");
    return out;
}

inline long long parse_int(const Setting& st, const std::string& key) {
    const std::string v = trim(st.value);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(st.origin + ": " + key + ": expected an integer, got '" + st.value + "'");
    return out;
}

inline bool parse_bool(const Setting& st, const std::string& key) {
    const std::string v = trim(st.value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(st.origin + ": " + key + ": expected true or false, got '" + st.value + "'");
}

inline std::vector<double> parse_list(const Setting& st, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(st.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double({item, st.origin}, key));
    if (out.empty()) throw ConfigError(st.origin + ": " + key + ": empty list");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw ConfigError(st.origin + ": " + key + ": list must be strictly increasing");
    return out;
}

}  // namespace detail

/// Parses "key = value" lines. Blank lines and '#' comments are skipped.
inline SettingMap parse_config_text(const std::string& text, const std::string& source) {
    SettingMap out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string origin = source + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ": missing key");
        if (value.empty()) throw ConfigError(origin + ": " + key + ": missing value");
        out[key] = {value, origin};
    }
    return out;
}

struct RunConfig {
    KerrParams params{0.0, 1.0, 1.0};
    double alpha_re = 1.0;
    double alpha_im = 0.0;
    double tau_abs = 0.0;
    double tau_phase = 0.0;
    double t = 1.0;
    double t_min = 0.0;
    std::optional<double> t_max;  ///< default: pi / (xi w2), one half period
    long long steps = 101;
    std::vector<double> xi_list{0.1, 0.5, 1.0};
    std::vector<double> x2_list{0.5, 1.0, 2.0, 4.0};
    std::vector<double> s_list{0.05, 0.1, 0.2, 0.5, 1.0};
    std::string format = "csv";
    std::string out;
    long long threads = 1;
    bool check = false;

    cplx alpha() const { return {alpha_re, alpha_im}; }
    SqueezedState state() const { return {{alpha()}, {tau_abs, tau_phase}, params.xi}; }

    double resolved_t_max() const {
        if (t_max) return *t_max;
        if (params.w2 == 0.0) throw ConfigError("t-max: required when w2 = 0");
        return pi / std::abs(params.xi * params.w2);
    }

    std::vector<double> time_grid() const {
        const double hi = resolved_t_max();
        std::vector<double> g(static_cast<std::size_t>(steps));
        for (long long i = 0; i < steps; ++i) g[std::size_t(i)] = t_min + (hi - t_min) * double(i) / double(steps - 1);
        return g;
    }

    void validate() const {
        if (!(params.xi > 0.0)) throw ConfigError("xi: must be positive");
        if (steps < 2) throw ConfigError("steps: must be at least 2");
        if (threads < 1 || threads > 256) throw ConfigError("threads: must lie in [1, 256]");
        if (format != "csv" && format != "json") throw ConfigError("format: must be csv or json, got '" + format + "'");
        if (tau_abs < 0.0) throw ConfigError("tau-abs: must be non-negative");
        if (!(resolved_t_max() > t_min)) throw ConfigError("t-max: must exceed t-min");
        for (double x : xi_list)
            if (!(x > 0.0)) throw ConfigError("xi-list: entries must be positive");
        for (double s : s_list)
            if (!(s > 0.0 && s <= 1.0)) throw ConfigError("s-list: entries must lie in (0, 1]");
        for (double x : x2_list)
            if (x < 0.0) throw ConfigError("x2-list: entries must be non-negative");
    }

    void apply(const std::string& key, const Setting& st) {
        using namespace detail;
        if (key == "xi") params.xi = parse_double(st, key);
        else if (key == "w1") params.w1 = parse_double(st, key);
        else if (key == "w2") params.w2 = parse_double(st, key);
        else if (key == "alpha-re") alpha_re = parse_double(st, key);
        else if (key == "alpha-im") alpha_im = parse_double(st, key);
        else if (key == "tau-abs") tau_abs = parse_double(st, key);
        else if (key == "tau-phase") tau_phase = parse_double(st, key);
        else if (key == "t") t = parse_double(st, key);
        else if (key == "t-min") t_min = parse_double(st, key);
        else if (key == "t-max") t_max = parse_double(st, key);
        else if (key == "steps") steps = parse_int(st, key);
        else if (key == "xi-list") xi_list = parse_list(st, key);
        else if (key == "x2-list") x2_list = parse_list(st, key);
        else if (key == "s-list") s_list = parse_list(st, key);
        else if (key == "format") format = trim(st.value);
        else if (key == "out") out = trim(st.value);
        else if (key == "threads") threads = parse_int(st, key);
        else if (key == "check") check = parse_bool(st, key);
        else throw ConfigError(st.origin + ": unknown key '" + key + "'");
    }

    void apply(const SettingMap& settings) {
        for (const auto& [k, v] : settings) apply(k, v);
    }

    /// Resolved settings in a fixed order; output paths and thread counts are left out
    /// so that they cannot change the bytes of a result file.
    ConfigEntries entries() const {
        return {{"xi", params.xi},
                {"w1", params.w1},
                {"w2", params.w2},
                {"alpha-re", alpha_re},
                {"alpha-im", alpha_im},
                {"tau-abs", tau_abs},
                {"tau-phase", tau_phase},
                {"t", t},
                {"t-min", t_min},
                {"t-max", resolved_t_max()},
                {"steps", steps},
                {"xi-list", xi_list},
                {"x2-list", x2_list},
                {"s-list", s_list},
                {"format", format},
                {"check", check}};
    }
};

}  // namespace kerr
