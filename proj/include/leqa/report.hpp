#pragma once

/**
 * @file report.hpp
 * @brief Fabric configuration files and benchmark comparison reports.
 */

#include "circuit.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "fabric.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace leqa {

/// Parse `AxB` (e.g. `60x60`). Zero dimensions parse; validate() rejects them.
[[nodiscard]] inline std::pair<std::size_t, std::size_t> parse_fabric_dims(std::string_view text) {
    const auto pos = text.find_first_of("xX");
    if (pos == std::string_view::npos) throw ConfigError("fabric must be given as AxB, got '" + std::string(text) + "'");
    auto a = detail::parse_uint(text.substr(0, pos));
    auto b = detail::parse_uint(text.substr(pos + 1));
    if (!a || !b) throw ConfigError("fabric must be given as AxB, got '" + std::string(text) + "'");
    return {static_cast<std::size_t>(*a), static_cast<std::size_t>(*b)};
}

[[nodiscard]] inline PathFactor parse_path_factor(std::string_view s) {
    if (s == "paper") return PathFactor::Paper;
    if (s == "corrected") return PathFactor::Corrected;
    throw ConfigError("path factor must be 'paper' or 'corrected', got '" + std::string(s) + "'");
}

[[nodiscard]] inline std::string_view path_factor_name(PathFactor f) noexcept {
    return f == PathFactor::Paper ? "paper" : "corrected";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view key, std::string_view value) {
    std::string v(value);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ConfigError("value for '" + std::string(key) + "' is not a number: '" + v + "'");
    }
    return d;
}

inline std::size_t parse_count(std::string_view key, std::string_view value) {
    auto n = parse_uint(value);
    if (!n) throw ConfigError("value for '" + std::string(key) + "' is not a non-negative integer");
    return static_cast<std::size_t>(*n);
}

}  // namespace detail

/**
 * @brief Apply a flat `key = value` configuration file.
 *
 * Keys: a, b, fabric (AxB), N_c, v, T_move, q_max, path_factor, and
 * d_<gate> for CNOT, H, T, Tdag, S, X, Y, Z. `#` starts a comment; string
 * values may be quoted.
 */
inline void apply_config_text(FabricConfig& cfg, std::string_view text) {
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        std::string_view line = detail::trim(detail::strip_comment(raw));
        if (line.empty() || line.front() == '[') return;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string_view key = detail::trim(line.substr(0, eq));
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

        if (key == "a") {
            cfg.width = detail::parse_count(key, value);
        } else if (key == "b") {
            cfg.length = detail::parse_count(key, value);
        } else if (key == "fabric") {
            std::tie(cfg.width, cfg.length) = parse_fabric_dims(value);
        } else if (key == "N_c") {
            cfg.channel_capacity = detail::parse_count(key, value);
        } else if (key == "v") {
            cfg.speed = detail::parse_number(key, value);
        } else if (key == "T_move") {
            cfg.t_move = detail::parse_number(key, value);
        } else if (key == "q_max") {
            cfg.q_max = detail::parse_count(key, value);
        } else if (key == "path_factor") {
            cfg.path_factor = parse_path_factor(value);
        } else if (key.starts_with("d_")) {
            std::string gate = detail::lowercase(key.substr(2));
            auto kind = kind_from_mnemonic(gate);
            if (!kind || !is_fault_tolerant(*kind)) {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown gate delay '" +
                                  std::string(key) + "'");
            }
            cfg.delays[*kind] = detail::parse_number(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    });
}

struct BenchRow {
    std::string name;
    std::size_t qubits = 0;
    std::size_t operations = 0;
    double estimated_us = 0.0;
    std::optional<double> simulated_us;
    double estimator_seconds = 0.0;
    std::optional<double> mapper_seconds;

    [[nodiscard]] std::optional<double> error_percent() const {
        if (!simulated_us) return std::nullopt;
        return std::abs(*simulated_us - estimated_us) / *simulated_us * 100.0;
    }

    [[nodiscard]] std::optional<double> speedup() const {
        if (!mapper_seconds || estimator_seconds <= 0.0) return std::nullopt;
        return *mapper_seconds / estimator_seconds;
    }
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<std::string> notes;

    [[nodiscard]] std::optional<double> mean_error_percent() const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : rows) {
            if (auto e = r.error_percent()) {
                sum += *e;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    }
};

[[nodiscard]] inline nlohmann::json to_json(const BenchReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"benchmark", r.name},
            {"qubits", r.qubits},
            {"operations", r.operations},
            {"estimated_s", r.estimated_us * 1e-6},
            {"actual_s", r.simulated_us ? nlohmann::json(*r.simulated_us * 1e-6) : nlohmann::json(nullptr)},
            {"error_percent", opt(r.error_percent())},
            {"estimator_runtime_s", r.estimator_seconds},
            {"mapper_runtime_s", opt(r.mapper_seconds)},
            {"speedup", opt(r.speedup())},
        });
    }
    return {{"rows", rows}, {"mean_error_percent", opt(report.mean_error_percent())}, {"notes", report.notes}};
}

[[nodiscard]] inline std::string to_csv(const BenchReport& report) {
    auto opt = [](const std::optional<double>& v) {
        if (!v) return std::string();
        std::ostringstream s;
        s.precision(10);
        s << *v;
        return s.str();
    };
    std::ostringstream out;
    out.precision(10);
    out << "benchmark,qubits,operations,actual_s,estimated_s,error_percent,mapper_runtime_s,estimator_runtime_s,speedup\n";
    for (const auto& r : report.rows) {
        out << r.name << ',' << r.qubits << ',' << r.operations << ','
            << opt(r.simulated_us ? std::optional<double>(*r.simulated_us * 1e-6) : std::nullopt) << ','
            << r.estimated_us * 1e-6 << ',' << opt(r.error_percent()) << ',' << opt(r.mapper_seconds) << ','
            << r.estimator_seconds << ',' << opt(r.speedup()) << '\n';
    }
    return out.str();
}

[[nodiscard]] inline std::string to_text(const BenchReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %7s %10s %11s %11s %8s %10s %10s %8s\n", "benchmark", "qubits",
                  "ops", "actual(s)", "est(s)", "err(%)", "map(s)", "est rt(s)", "speedup");
    out << line;
    for (const auto& r : report.rows) {
        const std::string actual = r.simulated_us ? format_seconds(*r.simulated_us * 1e-6) : "-";
        std::string err = "-";
        std::string map_rt = "-";
        std::string speed = "-";
        char buf[32];
        if (auto e = r.error_percent()) {
            std::snprintf(buf, sizeof buf, "%.2f", *e);
            err = buf;
        }
        if (r.mapper_seconds) {
            std::snprintf(buf, sizeof buf, "%.3f", *r.mapper_seconds);
            map_rt = buf;
        }
        if (auto s = r.speedup()) {
            std::snprintf(buf, sizeof buf, "%.1f", *s);
            speed = buf;
        }
        std::snprintf(line, sizeof line, "%-24s %7zu %10zu %11s %11s %8s %10s %10.4f %8s\n", r.name.c_str(),
                      r.qubits, r.operations, actual.c_str(), format_seconds(r.estimated_us * 1e-6).c_str(),
                      err.c_str(), map_rt.c_str(), r.estimator_seconds, speed.c_str());
        out << line;
    }
    if (auto m = report.mean_error_percent()) {
        std::snprintf(line, sizeof line, "mean absolute error: %.2f%%\n", *m);
        out << line;
    }
    for (const auto& n : report.notes) out << "note: " << n << '\n';
    return out.str();
}

}  // namespace leqa
