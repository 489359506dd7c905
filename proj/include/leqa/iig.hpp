#pragma once

/**
 * @file iig.hpp
 * @brief Interaction intensity graph and presence-zone statistics.
 */

#include "circuit.hpp"
#include "error.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace leqa {

/// Undirected weighted graph over qubits; weight = number of CNOTs on the pair.
class Iig {
public:
    explicit Iig(std::size_t qubit_count = 0) : adjacency_(qubit_count) {}

    void add_interaction(Qubit i, Qubit j, std::uint64_t count = 1) {
        if (i == j) throw CircuitError("interaction graph has no self-loops");
        if (i >= adjacency_.size() || j >= adjacency_.size()) throw CircuitError("qubit out of range");
        adjacency_[i][j] += count;
        adjacency_[j][i] += count;
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return adjacency_.size(); }
    [[nodiscard]] const std::map<Qubit, std::uint64_t>& neighbours(Qubit i) const { return adjacency_.at(i); }

    /// M_i: number of distinct interaction partners.
    [[nodiscard]] std::size_t degree(Qubit i) const { return adjacency_.at(i).size(); }

    /// W_i: summed weight of the edges incident to i.
    [[nodiscard]] std::uint64_t weighted_degree(Qubit i) const {
        std::uint64_t w = 0;
        for (const auto& [j, c] : adjacency_.at(i)) w += c;
        return w;
    }

    [[nodiscard]] std::uint64_t weight(Qubit i, Qubit j) const {
        const auto& adj = adjacency_.at(i);
        auto it = adj.find(j);
        return it == adj.end() ? 0 : it->second;
    }

    [[nodiscard]] std::size_t edge_count() const noexcept {
        std::size_t e = 0;
        for (const auto& adj : adjacency_) e += adj.size();
        return e / 2;
    }

    /// `i j w` per edge with i < j, ordered by (i, j).
    [[nodiscard]] std::string edge_list() const {
        std::ostringstream out;
        for (Qubit i = 0; i < adjacency_.size(); ++i) {
            for (const auto& [j, w] : adjacency_[i]) {
                if (i < j) out << i << ' ' << j << ' ' << w << '\n';
            }
        }
        return out.str();
    }

    friend bool operator==(const Iig&, const Iig&) = default;

private:
    std::vector<std::map<Qubit, std::uint64_t>> adjacency_;
};

[[nodiscard]] inline Iig build_iig(const Circuit& c) {
    Iig g(c.qubit_count());
    for (const Gate& gate : c.gates()) {
        if (gate.kind == GateKind::Cnot) {
            g.add_interaction(gate.operands[0], gate.operands[1]);
        } else if (!is_fault_tolerant(gate.kind)) {
            throw CircuitError("interaction graph requires an FT-lowered circuit");
        }
    }
    return g;
}

/**
 * @brief Presence-zone statistics.
 *
 * B_i = M_i + 1 and the average zone area B is the W-weighted mean of B_i,
 * kept as the exact ratio `area_numerator / area_denominator`.
 */
struct ZoneStats {
    std::vector<std::size_t> degree;        // M_i
    std::vector<std::uint64_t> zone_area;   // B_i
    std::vector<std::uint64_t> weight;      // W_i
    std::uint64_t area_numerator = 0;       // sum W_i B_i
    std::uint64_t area_denominator = 0;     // sum W_i

    [[nodiscard]] double average_area() const noexcept {
        return static_cast<double>(area_numerator) / static_cast<double>(area_denominator);
    }

    /// ceil(sqrt(B)) computed exactly from the rational B.
    [[nodiscard]] std::size_t zone_side() const noexcept {
        auto s = static_cast<unsigned __int128>(std::ceil(std::sqrt(average_area())));
        auto fits = [&](unsigned __int128 side) {
            return side * side * area_denominator >= static_cast<unsigned __int128>(area_numerator);
        };
        while (s > 1 && fits(s - 1)) --s;
        while (!fits(s)) ++s;
        return static_cast<std::size_t>(s);
    }
};

/// Throws NoInteractionError when the graph has no edges.
[[nodiscard]] inline ZoneStats zone_stats(const Iig& g) {
    ZoneStats zs;
    const std::size_t n = g.qubit_count();
    zs.degree.resize(n);
    zs.zone_area.resize(n);
    zs.weight.resize(n);
    for (Qubit i = 0; i < n; ++i) {
        zs.degree[i] = g.degree(i);
        zs.zone_area[i] = zs.degree[i] + 1;
        zs.weight[i] = g.weighted_degree(i);
        zs.area_numerator += zs.weight[i] * zs.zone_area[i];
        zs.area_denominator += zs.weight[i];
    }
    if (zs.area_denominator == 0) throw NoInteractionError();
    return zs;
}

/// zone_stats(build_iig(c)), using a dense pair table for small qubit counts.
[[nodiscard]] inline ZoneStats zone_stats(const Circuit& c) {
    constexpr std::size_t kDenseLimit = 256;
    const std::size_t n = c.qubit_count();
    if (n > kDenseLimit) return zone_stats(build_iig(c));

    std::vector<std::uint32_t> pairs(n * n, 0);
    ZoneStats zs;
    zs.degree.assign(n, 0);
    zs.zone_area.assign(n, 0);
    zs.weight.assign(n, 0);
    for (const Gate& gate : c.gates()) {
        if (gate.kind != GateKind::Cnot) {
            if (!is_fault_tolerant(gate.kind)) throw CircuitError("interaction graph requires an FT-lowered circuit");
            continue;
        }
        const Qubit a = gate.operands[0], b = gate.operands[1];
        if (pairs[a * n + b]++ == 0) {
            ++pairs[b * n + a];
            ++zs.degree[a];
            ++zs.degree[b];
        } else {
            ++pairs[b * n + a];
        }
        ++zs.weight[a];
        ++zs.weight[b];
    }
    for (std::size_t i = 0; i < n; ++i) {
        zs.zone_area[i] = zs.degree[i] + 1;
        zs.area_numerator += zs.weight[i] * zs.zone_area[i];
        zs.area_denominator += zs.weight[i];
    }
    if (zs.area_denominator == 0) throw NoInteractionError();
    return zs;
}

}  // namespace leqa
