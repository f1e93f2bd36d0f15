/*
 * output.hpp - deterministic CSV and JSON emission.
 *
 * Doubles are always printed with "%.17g" in the C locale, lines end in '\n',
 * and a non-finite value is an error: singular grid points are carried as
 * the string sentinel "singular" instead.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "kerr/errors.hpp"
#include "kerr/run_config.hpp"

namespace kerr {

inline constexpr const char* kSingularSentinel = "singular";

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
    if (!std::isfinite(v)) throw Error("refusing to emit a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
            continue;
        }
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c, bool json) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    return json ? json_string(s) : s;
}

inline std::string config_text(const ConfigValue& v, bool json) {
    struct Visitor {
        bool json;
        std::string operator()(double d) const { return format_double(d); }
        std::string operator()(long long i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const std::string& s) const { return json ? json_string(s) : s; }
        std::string operator()(const std::vector<double>& xs) const {
            std::string out = json ? "[" : "";
            for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
            return json ? out + "]" : out;
        }
    };
    return std::visit(Visitor{json}, v);
}

}  // namespace detail

/// "# config: k=v k=v ..." then the header row and one line per row.
inline void write_csv(std::ostream& os, const Table& table, const ConfigEntries& config) {
    std::string line = "# config:";
    for (const auto& [k, v] : config) line += " " + k + "=" + detail::config_text(v, false);
    os << line << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::cell_text(row[i], false);
        os << '\n';
    }
}

/// {"config": {...}, "data": [{column: value, ...}, ...]}
inline void write_json(std::ostream& os, const Table& table, const ConfigEntries& config) {
    os << "{\n  \"config\": {";
    for (std::size_t i = 0; i < config.size(); ++i)
        os << (i ? ", " : "") << detail::json_string(config[i].first) << ": " << detail::config_text(config[i].second, true);
    os << "},\n  \"data\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            os << (i ? ", " : "") << detail::json_string(table.columns[i]) << ": "
               << detail::cell_text(table.rows[r][i], true);
        os << "}";
    }
    os << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

inline void write_table(std::ostream& os, const Table& table, const RunConfig& cfg) {
    if (cfg.format == "json") write_json(os, table, cfg.entries());
    else write_csv(os, table, cfg.entries());
}

/// Writes to cfg.out, or to the given stream when no path is set.
inline void emit_table(const Table& table, const RunConfig& cfg, std::ostream& fallback) {
    if (cfg.out.empty()) {
        write_table(fallback, table, cfg);
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ConfigError("out: cannot open '" + cfg.out + "' for writing");
    write_table(f, table, cfg);
}

}  // namespace kerr
