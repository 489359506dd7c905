#pragma once

/**
 * @file estimator.hpp
 * @brief Latency estimation without mapping.
 *
 * The average CNOT routing latency comes from a coverage model: every qubit
 * owns a square presence zone placed uniformly at random on the fabric, the
 * expected surface covered by exactly q zones weights a per-occupancy routing
 * delay, and congested channels behave as M/M/1 queues. The routing averages
 * are folded into the QODG node delays and the latency is read off the
 * critical path.
 */

#include "circuit.hpp"
#include "error.hpp"
#include "fabric.hpp"
#include "iig.hpp"
#include "qodg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace leqa {

// Expected random-TSP tour length in the unit square: c1 * sqrt(n) + c0.
inline constexpr double kTspLowerSlope = 0.708;
inline constexpr double kTspLowerIntercept = 0.551;
inline constexpr double kTspUpperSlope = 0.718;
inline constexpr double kTspUpperIntercept = 0.731;
// Midpoints of the two bounds.
inline constexpr double kTourSlope = 0.713;
inline constexpr double kTourIntercept = 0.641;

/// Binomial coefficients C(n, 0), C(n, 1), ... produced one step at a time.
class BinomialSequence {
public:
    explicit BinomialSequence(std::uint64_t n) noexcept : n_(n) {}

    [[nodiscard]] std::uint64_t index() const noexcept { return q_; }
    [[nodiscard]] double value() const noexcept { return value_; }

    /// Advance from C(n, q) to C(n, q + 1).
    void advance() {
        if (q_ >= n_) throw Error("binomial index past n");
        ++q_;
        value_ = value_ * static_cast<double>(n_ - q_ + 1) / static_cast<double>(q_);
    }

private:
    std::uint64_t n_;
    std::uint64_t q_ = 0;
    double value_ = 1.0;
};

[[nodiscard]] inline double binomial(std::uint64_t n, std::uint64_t q) {
    if (q > n) throw Error("binomial: q out of range");
    BinomialSequence seq(n);
    while (seq.index() < q) seq.advance();
    return seq.value();
}

/// Integer power by repeated squaring.
[[nodiscard]] inline double ipow(double base, std::uint64_t exp) noexcept {
    double result = 1.0;
    while (exp) {
        if (exp & 1U) result *= base;
        base *= base;
        exp >>= 1U;
    }
    return result;
}

/**
 * @brief Per-ULB probability of being covered by one randomly placed zone.
 *
 * Cells are addressed 1-based: x in [1, width], y in [1, length]. Every cell's
 * probability is numerator(x, y) / placements with an integer numerator.
 */
struct CoverageGrid {
    std::size_t width = 0;
    std::size_t length = 0;
    std::size_t side = 0;
    bool clamped = false;
    std::uint64_t placements = 0;
    std::vector<std::uint64_t> numerators;  // row-major, index (x-1)*length + (y-1)

    [[nodiscard]] double at(std::size_t x, std::size_t y) const {
        return static_cast<double>(numerators.at((x - 1) * length + (y - 1))) / static_cast<double>(placements);
    }

    [[nodiscard]] double sum() const noexcept {
        std::uint64_t total = 0;
        for (auto n : numerators) total += n;
        return static_cast<double>(total) / static_cast<double>(placements);
    }
};

/// Smallest integer s with s*s >= area.
[[nodiscard]] inline std::size_t zone_side_for_area(double area) {
    if (!(area >= 0.0) || !std::isfinite(area)) throw Error("zone area must be finite and non-negative");
    auto s = static_cast<std::size_t>(std::ceil(std::sqrt(area)));
    while (s > 1 && static_cast<double>(s - 1) * static_cast<double>(s - 1) >= area) --s;
    while (static_cast<double>(s) * static_cast<double>(s) < area) ++s;
    return std::max<std::size_t>(s, 1);
}

/// Coverage grid for a square zone of the given side. Sides larger than the
/// fabric are clamped to min(width, length) and flagged.
[[nodiscard]] inline CoverageGrid coverage_for_side(std::size_t width, std::size_t length, std::size_t side) {
    if (width == 0 || length == 0) throw ConfigError("fabric dimensions must be positive");
    if (side == 0) throw Error("zone side must be positive");
    CoverageGrid grid;
    grid.width = width;
    grid.length = length;
    grid.clamped = side > std::min(width, length);
    grid.side = std::min({side, width, length});
    const std::size_t s = grid.side;
    grid.placements = static_cast<std::uint64_t>(width - s + 1) * (length - s + 1);
    grid.numerators.resize(width * length);
    for (std::size_t x = 1; x <= width; ++x) {
        const std::size_t mx = std::min({x, width - x + 1, s, width - s + 1});
        for (std::size_t y = 1; y <= length; ++y) {
            const std::size_t my = std::min({y, length - y + 1, s, length - s + 1});
            grid.numerators[(x - 1) * length + (y - 1)] = static_cast<std::uint64_t>(mx) * my;
        }
    }
    return grid;
}

[[nodiscard]] inline CoverageGrid coverage_probability(const FabricConfig& cfg, double zone_area) {
    return coverage_for_side(cfg.width, cfg.length, zone_side_for_area(zone_area));
}

/**
 * @brief E[S_q] for q in [q_lo, q_hi]: expected number of cells covered by
 * exactly q of `qubits` independent zones.
 *
 * Returned vector element i holds q = q_lo + i.
 */
[[nodiscard]] inline std::vector<double> expected_coverage_range(const CoverageGrid& grid, std::size_t qubits,
                                                                 std::size_t q_lo, std::size_t q_hi) {
    if (q_hi > qubits || q_lo > q_hi) throw Error("expected_coverage: bad q range");

    // Cells sharing a numerator share a probability.
    std::map<std::uint64_t, std::uint64_t> histogram;
    for (auto n : grid.numerators) ++histogram[n];

    struct Level {
        double p;
        double count;
        double log_miss;  // log(1 - p), only meaningful when p < 1
    };
    std::vector<Level> levels;
    levels.reserve(histogram.size());
    for (auto [num, count] : histogram) {
        double p = static_cast<double>(num) / static_cast<double>(grid.placements);
        levels.push_back({p, static_cast<double>(count), p < 1.0 ? std::log1p(-p) : 0.0});
    }

    std::vector<double> out;
    out.reserve(q_hi - q_lo + 1);
    BinomialSequence choose(qubits);
    while (choose.index() < q_lo) choose.advance();
    for (std::size_t q = q_lo;; ++q) {
        const std::size_t rest = qubits - q;
        double sum = 0.0;
        for (const Level& lv : levels) {
            double hit = ipow(lv.p, q);
            double miss;
            if (rest == 0) {
                miss = 1.0;
            } else if (lv.p >= 1.0) {
                miss = 0.0;
            } else {
                miss = std::exp(static_cast<double>(rest) * lv.log_miss);
            }
            sum += lv.count * hit * miss;
        }
        out.push_back(choose.value() * sum);
        if (q == q_hi) break;
        choose.advance();
    }
    return out;
}

/// E[S_q] for q = 1 .. min(qubits, q_max).
[[nodiscard]] inline std::vector<double> expected_coverage(const CoverageGrid& grid, std::size_t qubits,
                                                           std::size_t q_max) {
    if (qubits == 0) throw Error("expected_coverage: need at least one qubit");
    return expected_coverage_range(grid, qubits, 1, std::min(qubits, q_max));
}

/// Expected shortest Hamiltonian path through M+1 random points in a zone of
/// area B (ULB units).
[[nodiscard]] inline double hamiltonian_estimate(std::size_t degree, double zone_area,
                                                 PathFactor factor = PathFactor::Paper) {
    if (degree == 0) throw Error("hamiltonian_estimate: qubit has no interaction partners");
    const double m = static_cast<double>(degree);
    const double tour = std::sqrt(zone_area) * (kTourSlope * std::sqrt(m + 1.0) + kTourIntercept);
    return factor == PathFactor::Paper ? tour * (m - 1.0) / m : tour * m / (m + 1.0);
}

struct UncongestedDelay {
    std::vector<std::optional<double>> per_qubit;  // empty for qubits without partners
    double average = 0.0;
};

/// Per-qubit d_uncong,i = E[l_ham,i] / (v * M_i) and its W-weighted mean.
[[nodiscard]] inline UncongestedDelay d_uncong_avg(const ZoneStats& zs, const FabricConfig& cfg) {
    UncongestedDelay out;
    out.per_qubit.resize(zs.degree.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < zs.degree.size(); ++i) {
        if (zs.degree[i] == 0) continue;
        double len = hamiltonian_estimate(zs.degree[i], static_cast<double>(zs.zone_area[i]), cfg.path_factor);
        double d = len / (cfg.speed * static_cast<double>(zs.degree[i]));
        out.per_qubit[i] = d;
        num += static_cast<double>(zs.weight[i]) * d;
        den += static_cast<double>(zs.weight[i]);
    }
    if (den == 0.0) throw NoInteractionError();
    out.average = num / den;
    return out;
}

/// Routing channel as an M/M/1 queue whose mean length equals the occupancy q.
struct QueueModel {
    std::size_t capacity;  // N_c
    double d_uncong;

    [[nodiscard]] double service_rate() const { return static_cast<double>(capacity) / d_uncong; }

    [[nodiscard]] double arrival_rate(std::size_t q) const {
        const double qd = static_cast<double>(q);
        return qd * static_cast<double>(capacity) / ((1.0 + qd) * d_uncong);
    }

    /// Mean queue length lambda / (mu - lambda).
    [[nodiscard]] double mean_queue_length(std::size_t q) const {
        return arrival_rate(q) / (service_rate() - arrival_rate(q));
    }

    /// Little's formula: W = l / lambda.
    [[nodiscard]] double waiting_time(std::size_t q) const {
        return (1.0 + static_cast<double>(q)) * d_uncong / static_cast<double>(capacity);
    }

    [[nodiscard]] double delay(std::size_t q) const { return q <= capacity ? d_uncong : waiting_time(q); }
};

[[nodiscard]] inline double queue_delay(std::size_t q, std::size_t capacity, double d_uncong) {
    return QueueModel{capacity, d_uncong}.delay(q);
}

struct RoutingAverage {
    double value = 0.0;
    bool degenerate = false;  // no covered surface at all
};

/// Coverage-weighted mean of d_q; element i of `surfaces` is E[S_{i+1}].
[[nodiscard]] inline RoutingAverage l_cnot_avg(std::span<const double> surfaces, std::size_t capacity,
                                               double d_uncong) {
    if (surfaces.empty()) throw Error("l_cnot_avg: no coverage terms");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        num += surfaces[i] * queue_delay(i + 1, capacity, d_uncong);
        den += surfaces[i];
    }
    if (den == 0.0) return {0.0, true};
    return {num / den, false};
}

/// Latency as the sum over critical-path operations of (gate delay + routing).
[[nodiscard]] inline double total_latency(const CriticalCounts& counts, const FabricConfig& cfg, double l_cnot,
                                          double l_g) {
    double d = static_cast<double>(counts.n_cnot) * (cfg.delay(GateKind::Cnot) + l_cnot);
    for (const auto& [kind, n] : counts.n_one_qubit) d += static_cast<double>(n) * (cfg.delay(kind) + l_g);
    return d;
}

struct OccupancyTerm {
    std::size_t q = 0;
    double expected_surface = 0.0;  // E[S_q], ULB^2
    double delay = 0.0;             // d_q, us
};

struct EstimationResult {
    double latency = 0.0;  // D, us
    double l_cnot_avg = 0.0;
    double l_g_avg = 0.0;
    double d_uncong = 0.0;
    std::optional<double> zone_area;  // B; empty when there are no CNOTs
    std::size_t zone_side = 0;
    std::size_t qubit_count = 0;
    std::size_t operation_count = 0;
    std::size_t qodg_nodes = 0;
    std::size_t qodg_edges = 0;
    CriticalCounts counts;
    std::vector<OccupancyTerm> per_q;
    std::vector<std::string> warnings;

    [[nodiscard]] double latency_seconds() const noexcept { return latency * 1e-6; }
};

/// Run the full estimation on an FT-lowered circuit.
[[nodiscard]] inline EstimationResult estimate(const Circuit& c, const FabricConfig& cfg) {
    cfg.validate();
    if (!c.is_fault_tolerant()) throw CircuitError("estimate requires an FT-lowered circuit");

    EstimationResult r;
    r.qubit_count = c.qubit_count();
    r.operation_count = c.size();
    r.l_g_avg = 2.0 * cfg.t_move;

    std::tie(r.qodg_nodes, r.qodg_edges) = qodg_shape(c);

    if (c.qubit_count() > 1 && c.count(GateKind::Cnot) > 0) {
        const ZoneStats zs = zone_stats(c);
        r.zone_area = zs.average_area();
        r.d_uncong = d_uncong_avg(zs, cfg).average;

        const CoverageGrid grid = coverage_for_side(cfg.width, cfg.length, zs.zone_side());
        r.zone_side = grid.side;
        if (grid.clamped) {
            r.warnings.push_back("presence zone side " + std::to_string(zs.zone_side()) +
                                 " exceeds the fabric; clamped to " + std::to_string(grid.side));
        }
        const std::vector<double> surfaces = expected_coverage(grid, c.qubit_count(), cfg.q_max);
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            r.per_q.push_back({i + 1, surfaces[i], queue_delay(i + 1, cfg.channel_capacity, r.d_uncong)});
        }
        const RoutingAverage avg = l_cnot_avg(surfaces, cfg.channel_capacity, r.d_uncong);
        if (avg.degenerate) r.warnings.push_back("no fabric surface covered by presence zones; L_CNOT set to 0");
        r.l_cnot_avg = avg.value;
    }

    r.counts = critical_path(c, cfg, r.l_cnot_avg, r.l_g_avg);
    r.latency = total_latency(r.counts, cfg, r.l_cnot_avg, r.l_g_avg);
    return r;
}

/// Scientific notation with four significant digits, e.g. 1.667E+00.
[[nodiscard]] inline std::string format_seconds(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3E", seconds);
    return buf;
}

[[nodiscard]] inline nlohmann::json to_json(const EstimationResult& r) {
    nlohmann::json one_qubit = nlohmann::json::object();
    for (const auto& [kind, n] : r.counts.n_one_qubit) one_qubit[std::string(mnemonic(kind))] = n;
    nlohmann::json per_q = nlohmann::json::array();
    for (const auto& t : r.per_q) {
        per_q.push_back({{"q", t.q}, {"expected_surface", t.expected_surface}, {"d_q_us", t.delay}});
    }
    nlohmann::json j = {
        {"latency_us", r.latency},
        {"latency_s", r.latency_seconds()},
        {"latency_s_text", format_seconds(r.latency_seconds())},
        {"l_cnot_avg_us", r.l_cnot_avg},
        {"l_g_avg_us", r.l_g_avg},
        {"d_uncong_us", r.d_uncong},
        {"zone_area", r.zone_area ? nlohmann::json(*r.zone_area) : nlohmann::json(nullptr)},
        {"zone_side", r.zone_side},
        {"qubits", r.qubit_count},
        {"operations", r.operation_count},
        {"qodg", {{"nodes", r.qodg_nodes}, {"edges", r.qodg_edges}}},
        {"critical", {{"cnot", r.counts.n_cnot}, {"one_qubit", one_qubit}, {"length_us", r.counts.path_length}}},
        {"per_q", per_q},
        {"warnings", r.warnings},
    };
    return j;
}

[[nodiscard]] inline std::string to_text(const EstimationResult& r) {
    std::ostringstream out;
    out << "qubits            " << r.qubit_count << '\n'
        << "operations        " << r.operation_count << '\n'
        << "QODG              " << r.qodg_nodes << " nodes, " << r.qodg_edges << " edges\n";
    if (r.zone_area) {
        out << "zone area B       " << *r.zone_area << " ULB^2 (side " << r.zone_side << ")\n";
    }
    out << "d_uncong          " << r.d_uncong << " us\n"
        << "L_CNOT avg        " << r.l_cnot_avg << " us\n"
        << "L_g avg           " << r.l_g_avg << " us\n"
        << "critical CNOTs    " << r.counts.n_cnot << '\n';
    for (const auto& [kind, n] : r.counts.n_one_qubit) {
        out << "critical " << mnemonic(kind) << std::string(9 - mnemonic(kind).size(), ' ') << n << '\n';
    }
    out << "latency D         " << r.latency << " us (" << format_seconds(r.latency_seconds()) << " s)\n";
    for (const auto& w : r.warnings) out << "warning: " << w << '\n';
    return out.str();
}

}  // namespace leqa
