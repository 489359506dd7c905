#pragma once

#include "circuit.hpp"
#include "error.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

namespace leqa {

/**
 * @brief Random FT circuit for scaling studies.
 *
 * CNOT partners are drawn with locality bias: most of the time a recent
 * partner is reused (geometric preference for the most recent), otherwise a
 * qubit at a geometrically distributed ring distance is picked. This keeps the
 * interaction-graph degree small, as in synthesized arithmetic circuits.
 */
[[nodiscard]] inline Circuit generate_random_circuit(std::size_t qubits, std::size_t operations,
                                                     double cnot_fraction, std::uint64_t seed) {
    if (qubits == 0) throw CircuitError("generator needs at least one qubit");
    if (!(cnot_fraction >= 0.0 && cnot_fraction <= 1.0)) throw CircuitError("cnot fraction must lie in [0, 1]");
    if (cnot_fraction > 0.0 && qubits < 2) throw CircuitError("CNOTs need at least two qubits");

    constexpr std::size_t kRecent = 4;
    constexpr double kReuse = 0.75;

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution is_cnot(cnot_fraction);
    std::bernoulli_distribution reuse(kReuse);
    std::bernoulli_distribution coin(0.5);
    std::geometric_distribution<std::size_t> geo(0.5);
    std::uniform_int_distribution<Qubit> any_qubit(0, static_cast<Qubit>(qubits - 1));
    std::uniform_int_distribution<std::size_t> one_qubit_kind(0, kOneQubitFtKinds.size() - 1);

    std::vector<std::deque<Qubit>> recent(qubits);
    auto remember = [&](Qubit a, Qubit b) {
        auto& r = recent[a];
        std::erase(r, b);
        r.push_front(b);
        if (r.size() > kRecent) r.pop_back();
    };

    std::vector<Gate> gates;
    gates.reserve(operations);
    for (std::size_t i = 0; i < operations; ++i) {
        const Qubit q = any_qubit(rng);
        if (!is_cnot(rng)) {
            gates.push_back(make_gate(kOneQubitFtKinds[one_qubit_kind(rng)], {q}));
            continue;
        }
        Qubit partner;
        if (qubits == 2) {
            partner = 1 - q;
        } else if (!recent[q].empty() && reuse(rng)) {
            partner = recent[q][std::min(geo(rng), recent[q].size() - 1)];
        } else {
            const std::size_t dist = 1 + geo(rng) % (qubits - 1);
            partner = static_cast<Qubit>(coin(rng) ? (q + dist) % qubits : (q + qubits - dist) % qubits);
        }
        remember(q, partner);
        remember(partner, q);
        gates.push_back(make_gate(GateKind::Cnot, {q, partner}));
    }
    return Circuit(qubits, std::move(gates));
}

}  // namespace leqa
