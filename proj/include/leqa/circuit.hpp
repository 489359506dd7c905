#pragma once

/**
 * @file circuit.hpp
 * @brief Reversible circuits, netlist I/O and lowering to the fault-tolerant gate set.
 *
 * The FT gate set is {CNOT, H, T, T^dagger, S, X, Y, Z}. Synthesized reversible
 * circuits additionally use NOT, multi-control Toffoli and Fredkin gates; the
 * lowering passes rewrite those into FT gates while preserving gate order.
 */

#include "error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace leqa {

using Qubit = std::uint32_t;

/// Gate kinds. The first eight form the FT set and index delay tables.
enum class GateKind : std::uint8_t {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Tdag,
    Cnot,
    Not,
    Toffoli,
    Fredkin,
};

inline constexpr std::size_t kFtKindCount = 8;

inline constexpr std::array<GateKind, kFtKindCount> kFtKinds = {
    GateKind::X, GateKind::Y, GateKind::Z,    GateKind::H,
    GateKind::S, GateKind::T, GateKind::Tdag, GateKind::Cnot,
};

inline constexpr std::array<GateKind, 7> kOneQubitFtKinds = {
    GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::T, GateKind::Tdag,
};

[[nodiscard]] constexpr bool is_fault_tolerant(GateKind k) noexcept {
    return static_cast<std::size_t>(k) < kFtKindCount;
}

[[nodiscard]] constexpr std::size_t ft_index(GateKind k) noexcept { return static_cast<std::size_t>(k); }

[[nodiscard]] constexpr std::string_view mnemonic(GateKind k) noexcept {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::T: return "t";
        case GateKind::Tdag: return "tdag";
        case GateKind::Cnot: return "cnot";
        case GateKind::Not: return "not";
        case GateKind::Toffoli: return "toffoli";
        case GateKind::Fredkin: return "fredkin";
    }
    return "?";
}

[[nodiscard]] inline std::optional<GateKind> kind_from_mnemonic(std::string_view s) {
    static constexpr std::array<GateKind, 11> all = {
        GateKind::X,    GateKind::Y,    GateKind::Z,   GateKind::H,       GateKind::S,       GateKind::T,
        GateKind::Tdag, GateKind::Cnot, GateKind::Not, GateKind::Toffoli, GateKind::Fredkin,
    };
    for (GateKind k : all) {
        if (mnemonic(k) == s) return k;
    }
    return std::nullopt;
}

/// Returns an empty string when `operand_count` is acceptable for `kind`,
/// otherwise a description of the expected arity.
[[nodiscard]] inline std::string arity_problem(GateKind kind, std::size_t operand_count) {
    switch (kind) {
        case GateKind::Cnot:
            return operand_count == 2 ? "" : "cnot takes exactly 2 qubits";
        case GateKind::Toffoli:
            return operand_count >= 3 ? "" : "toffoli takes at least 2 controls and a target";
        case GateKind::Fredkin:
            return operand_count >= 3 ? "" : "fredkin takes at least 1 control and 2 targets";
        default:
            return operand_count == 1 ? "" : std::string(mnemonic(kind)) + " takes exactly 1 qubit";
    }
}

/**
 * @brief A gate applied to an ordered operand list.
 *
 * Operand conventions: CNOT is [control, target]; TOFFOLI lists its controls
 * then the target; FREDKIN lists its controls then the two swapped qubits.
 */
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<Qubit> operands;

    Gate() = default;
    Gate(GateKind k, std::vector<Qubit> ops) : kind(k), operands(std::move(ops)) {
        if (auto problem = arity_problem(kind, operands.size()); !problem.empty()) {
            throw CircuitError(problem);
        }
        std::vector<Qubit> sorted = operands;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw CircuitError("duplicate operand in " + std::string(mnemonic(kind)) + " gate");
        }
    }

    [[nodiscard]] std::size_t control_count() const noexcept {
        switch (kind) {
            case GateKind::Cnot: return 1;
            case GateKind::Toffoli: return operands.size() - 1;
            case GateKind::Fredkin: return operands.size() - 2;
            default: return 0;
        }
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

inline Gate make_gate(GateKind k, std::initializer_list<Qubit> ops) { return Gate(k, std::vector<Qubit>(ops)); }

/// An ordered gate sequence over `qubit_count()` logical qubits.
class Circuit {
public:
    Circuit() = default;

    explicit Circuit(std::size_t qubit_count, std::vector<Gate> gates = {}, std::vector<std::string> labels = {})
        : qubit_count_(qubit_count), gates_(std::move(gates)), labels_(std::move(labels)) {
        if (qubit_count_ == 0) throw CircuitError("circuit must declare at least one qubit");
        if (!labels_.empty() && labels_.size() != qubit_count_) {
            throw CircuitError("qubit label count does not match qubit count");
        }
        for (const Gate& g : gates_) check_operands(g);
    }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubit_count_; }
    [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }

    void append(Gate g) {
        check_operands(g);
        gates_.push_back(std::move(g));
    }

    [[nodiscard]] bool is_fault_tolerant() const noexcept {
        return std::all_of(gates_.begin(), gates_.end(), [](const Gate& g) { return leqa::is_fault_tolerant(g.kind); });
    }

    [[nodiscard]] std::size_t count(GateKind k) const noexcept {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(), [k](const Gate& g) { return g.kind == k; }));
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    void check_operands(const Gate& g) const {
        for (Qubit q : g.operands) {
            if (q >= qubit_count_) {
                throw CircuitError("qubit index " + std::to_string(q) + " out of range for " +
                                   std::to_string(qubit_count_) + " qubits");
            }
        }
    }

    std::size_t qubit_count_ = 0;
    std::vector<Gate> gates_;
    std::vector<std::string> labels_;
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

inline std::string_view strip_comment(std::string_view line) {
    if (auto pos = line.find('#'); pos != std::string_view::npos) return line.substr(0, pos);
    return line;
}

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 18) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line_no, line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
        ++line_no;
    }
}

}  // namespace detail

/**
 * @brief Parse the native line-based netlist format.
 *
 * The first non-comment line is `qubits <N>`; every following line holds one
 * gate `<mnemonic> q<i> ...`. `#` starts a comment.
 */
[[nodiscard]] inline Circuit parse_netlist(std::string_view text) {
    std::optional<std::size_t> qubits;
    std::vector<Gate> gates;

    detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        auto tokens = detail::tokenize(detail::strip_comment(raw));
        if (tokens.empty()) return;

        std::string head = detail::lowercase(tokens[0].text);
        if (!qubits) {
            if (head != "qubits") throw ParseError(line_no, tokens[0].column, "expected 'qubits <N>' header");
            if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "'qubits' takes one count");
            auto n = detail::parse_uint(tokens[1].text);
            if (!n || *n == 0) throw ParseError(line_no, tokens[1].column, "qubit count must be a positive integer");
            qubits = static_cast<std::size_t>(*n);
            return;
        }

        auto kind = kind_from_mnemonic(head);
        if (!kind) throw ParseError(line_no, tokens[0].column, "unknown gate '" + std::string(tokens[0].text) + "'");

        std::vector<Qubit> operands;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            std::string_view tok = tokens[t].text;
            if (tok.size() < 2 || (tok[0] != 'q' && tok[0] != 'Q')) {
                throw ParseError(line_no, tokens[t].column, "expected qubit reference 'q<index>'");
            }
            auto idx = detail::parse_uint(tok.substr(1));
            if (!idx) throw ParseError(line_no, tokens[t].column, "malformed qubit index");
            if (*idx >= *qubits) {
                throw ParseError(line_no, tokens[t].column, "undeclared qubit '" + std::string(tok) + "'");
            }
            auto q = static_cast<Qubit>(*idx);
            if (std::find(operands.begin(), operands.end(), q) != operands.end()) {
                throw ParseError(line_no, tokens[t].column, "duplicate operand '" + std::string(tok) + "'");
            }
            operands.push_back(q);
        }
        if (auto problem = arity_problem(*kind, operands.size()); !problem.empty()) {
            throw ParseError(line_no, tokens[0].column, "arity mismatch: " + problem);
        }
        gates.emplace_back(*kind, std::move(operands));
    });

    if (!qubits) throw ParseError(1, 1, "missing 'qubits <N>' header");
    return Circuit(*qubits, std::move(gates));
}

/**
 * @brief Best-effort reader for `.real` reversible benchmark files.
 *
 * Supports `.numvars`, `.variables`, `.begin`/`.end` and the `t<n>` / `f<n>`
 * gate families. `f2` (a plain swap) is expanded to three CNOTs.
 */
[[nodiscard]] inline Circuit parse_real(std::string_view text) {
    std::optional<std::size_t> numvars;
    std::vector<std::string> names;
    std::unordered_map<std::string, Qubit> index;
    std::vector<Gate> gates;
    bool in_body = false;

    auto ensure_names = [&](std::size_t line_no) {
        if (!names.empty()) return;
        if (!numvars) throw ParseError(line_no, 1, "gate before .numvars/.variables");
        for (std::size_t i = 0; i < *numvars; ++i) {
            names.push_back("x" + std::to_string(i));
            index.emplace(names.back(), static_cast<Qubit>(i));
        }
    };

    detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        auto tokens = detail::tokenize(detail::strip_comment(raw));
        if (tokens.empty()) return;
        std::string head = detail::lowercase(tokens[0].text);

        if (head[0] == '.') {
            if (head == ".numvars") {
                if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, ".numvars takes one count");
                auto n = detail::parse_uint(tokens[1].text);
                if (!n || *n == 0) throw ParseError(line_no, tokens[1].column, "bad variable count");
                numvars = static_cast<std::size_t>(*n);
            } else if (head == ".variables") {
                names.clear();
                index.clear();
                for (std::size_t t = 1; t < tokens.size(); ++t) {
                    std::string name(tokens[t].text);
                    if (!index.emplace(name, static_cast<Qubit>(names.size())).second) {
                        throw ParseError(line_no, tokens[t].column, "duplicate variable '" + name + "'");
                    }
                    names.push_back(std::move(name));
                }
                if (numvars && *numvars != names.size()) {
                    throw ParseError(line_no, tokens[0].column, ".variables count disagrees with .numvars");
                }
            } else if (head == ".begin") {
                in_body = true;
            } else if (head == ".end") {
                in_body = false;
            }
            // .version, .inputs, .outputs, .constants, .garbage carry no gate data.
            return;
        }

        if (!in_body) throw ParseError(line_no, tokens[0].column, "gate outside .begin/.end");
        ensure_names(line_no);

        char family = head[0];
        auto declared = detail::parse_uint(std::string_view(head).substr(1));
        if ((family != 't' && family != 'f') || !declared) {
            throw ParseError(line_no, tokens[0].column, "unsupported gate '" + std::string(tokens[0].text) + "'");
        }
        if (*declared != tokens.size() - 1) {
            throw ParseError(line_no, tokens[0].column, "arity mismatch: " + head + " lists " +
                                                            std::to_string(tokens.size() - 1) + " variables");
        }
        std::vector<Qubit> ops;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            auto it = index.find(std::string(tokens[t].text));
            if (it == index.end()) {
                throw ParseError(line_no, tokens[t].column, "undeclared variable '" + std::string(tokens[t].text) + "'");
            }
            if (std::find(ops.begin(), ops.end(), it->second) != ops.end()) {
                throw ParseError(line_no, tokens[t].column, "duplicate operand '" + std::string(tokens[t].text) + "'");
            }
            ops.push_back(it->second);
        }

        if (family == 't') {
            if (ops.size() == 1) {
                gates.emplace_back(GateKind::Not, std::move(ops));
            } else if (ops.size() == 2) {
                gates.emplace_back(GateKind::Cnot, std::move(ops));
            } else {
                gates.emplace_back(GateKind::Toffoli, std::move(ops));
            }
        } else {
            if (ops.size() < 2) throw ParseError(line_no, tokens[0].column, "fredkin needs two targets");
            if (ops.size() == 2) {
                gates.push_back(make_gate(GateKind::Cnot, {ops[0], ops[1]}));
                gates.push_back(make_gate(GateKind::Cnot, {ops[1], ops[0]}));
                gates.push_back(make_gate(GateKind::Cnot, {ops[0], ops[1]}));
            } else {
                gates.emplace_back(GateKind::Fredkin, std::move(ops));
            }
        }
    });

    if (names.empty()) {
        if (!numvars) throw ParseError(1, 1, "missing .numvars or .variables");
        ensure_names(1);
    }
    const std::size_t qubits = names.size();
    return Circuit(qubits, std::move(gates), std::move(names));
}

/// Serialize to the native netlist format. Labels are not emitted.
[[nodiscard]] inline std::string serialize(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.qubit_count() << '\n';
    for (const Gate& g : c.gates()) {
        out << mnemonic(g.kind);
        for (Qubit q : g.operands) out << " q" << q;
        out << '\n';
    }
    return out.str();
}

/**
 * @brief Split Toffoli gates with more than two controls and Fredkin gates with
 * more than one control into 3-input gates.
 *
 * A k-control Toffoli uses a compute/uncompute V-chain over k-2 fresh ancillas;
 * a k-control Fredkin computes the AND of its controls into k-1 fresh ancillas
 * and applies a singly-controlled Fredkin. Ancillas start and end in |0>, and
 * are never shared between decomposed gates.
 */
[[nodiscard]] inline Circuit decompose_multicontrol(const Circuit& c) {
    std::size_t next = c.qubit_count();
    std::vector<Gate> out;
    out.reserve(c.size());

    // Emits Toffolis computing ancilla[j] = AND(controls[0..j+1]); returns the last ancilla.
    auto and_chain = [&](const std::vector<Qubit>& controls, std::size_t ancillas) {
        std::vector<Gate> chain;
        std::vector<Qubit> anc;
        for (std::size_t j = 0; j < ancillas; ++j) anc.push_back(static_cast<Qubit>(next++));
        chain.push_back(make_gate(GateKind::Toffoli, {controls[0], controls[1], anc[0]}));
        for (std::size_t j = 1; j < ancillas; ++j) {
            chain.push_back(make_gate(GateKind::Toffoli, {controls[j + 1], anc[j - 1], anc[j]}));
        }
        return std::pair{std::move(chain), std::move(anc)};
    };

    for (const Gate& g : c.gates()) {
        std::size_t k = g.control_count();
        if (g.kind == GateKind::Toffoli && k > 2) {
            std::vector<Qubit> controls(g.operands.begin(), g.operands.end() - 1);
            auto [chain, anc] = and_chain(controls, k - 2);
            out.insert(out.end(), chain.begin(), chain.end());
            out.push_back(make_gate(GateKind::Toffoli, {controls[k - 1], anc.back(), g.operands.back()}));
            out.insert(out.end(), chain.rbegin(), chain.rend());
        } else if (g.kind == GateKind::Fredkin && k > 1) {
            std::vector<Qubit> controls(g.operands.begin(), g.operands.end() - 2);
            auto [chain, anc] = and_chain(controls, k - 1);
            out.insert(out.end(), chain.begin(), chain.end());
            out.push_back(make_gate(GateKind::Fredkin, {anc.back(), g.operands[k], g.operands[k + 1]}));
            out.insert(out.end(), chain.rbegin(), chain.rend());
        } else {
            out.push_back(g);
        }
    }

    std::vector<std::string> labels = c.labels();
    if (!labels.empty()) {
        for (std::size_t q = c.qubit_count(); q < next; ++q) labels.push_back("anc" + std::to_string(q));
    }
    return Circuit(next, std::move(out), std::move(labels));
}

/// Replace each FREDKIN(c; a, b) by TOFFOLI(c,b;a) TOFFOLI(c,a;b) TOFFOLI(c,b;a).
[[nodiscard]] inline Circuit fredkin_to_toffoli(const Circuit& c) {
    std::vector<Gate> out;
    out.reserve(c.size());
    for (const Gate& g : c.gates()) {
        if (g.kind != GateKind::Fredkin) {
            out.push_back(g);
            continue;
        }
        if (g.operands.size() != 3) throw CircuitError("fredkin_to_toffoli expects 3-input Fredkin gates");
        Qubit ctl = g.operands[0], a = g.operands[1], b = g.operands[2];
        out.push_back(make_gate(GateKind::Toffoli, {ctl, b, a}));
        out.push_back(make_gate(GateKind::Toffoli, {ctl, a, b}));
        out.push_back(make_gate(GateKind::Toffoli, {ctl, b, a}));
    }
    return Circuit(c.qubit_count(), std::move(out), c.labels());
}

/// The 15-gate Clifford+T network for TOFFOLI(a, b; c): 6 CNOT, 7 T/T^dagger, 2 H.
[[nodiscard]] inline std::vector<Gate> toffoli_network(Qubit a, Qubit b, Qubit c) {
    using K = GateKind;
    return {
        make_gate(K::H, {c}),       make_gate(K::Cnot, {b, c}), make_gate(K::Tdag, {c}),
        make_gate(K::Cnot, {a, c}), make_gate(K::T, {c}),       make_gate(K::Cnot, {b, c}),
        make_gate(K::Tdag, {c}),    make_gate(K::Cnot, {a, c}), make_gate(K::T, {b}),
        make_gate(K::T, {c}),       make_gate(K::H, {c}),       make_gate(K::Cnot, {a, b}),
        make_gate(K::T, {a}),       make_gate(K::Tdag, {b}),    make_gate(K::Cnot, {a, b}),
    };
}

/// Expand 3-input Toffolis into the FT network and rename NOT to X.
[[nodiscard]] inline Circuit toffoli_to_ft(const Circuit& c) {
    std::vector<Gate> out;
    out.reserve(c.size() + 14 * c.count(GateKind::Toffoli));
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
            case GateKind::Toffoli: {
                if (g.operands.size() != 3) throw CircuitError("toffoli_to_ft expects 3-input Toffoli gates");
                auto net = toffoli_network(g.operands[0], g.operands[1], g.operands[2]);
                out.insert(out.end(), net.begin(), net.end());
                break;
            }
            case GateKind::Not:
                out.emplace_back(GateKind::X, g.operands);
                break;
            case GateKind::Fredkin:
                throw CircuitError("toffoli_to_ft: Fredkin gates must be lowered first");
            default:
                out.push_back(g);
        }
    }
    return Circuit(c.qubit_count(), std::move(out), c.labels());
}

/// Full lowering pipeline to the FT gate set.
[[nodiscard]] inline Circuit lower(const Circuit& c) {
    return toffoli_to_ft(fredkin_to_toffoli(decompose_multicontrol(c)));
}

}  // namespace leqa
