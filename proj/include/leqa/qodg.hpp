#pragma once

/**
 * @file qodg.hpp
 * @brief Quantum operation dependency graph (QODG) and critical-path analysis.
 *
 * Nodes are FT operations plus dummy START/END nodes; edges are qubit data
 * dependencies. Parallel edges are merged so the graph stays simple. Delays
 * live on nodes.
 */

#include "circuit.hpp"
#include "error.hpp"
#include "fabric.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace leqa {

using NodeId = std::uint32_t;

struct QodgNode {
    NodeId id = 0;
    std::optional<GateKind> op;  // empty for START/END
    std::vector<Qubit> operands;
};

class Qodg {
public:
    Qodg() = default;

    /**
     * @brief Build a graph from explicit nodes and edges.
     *
     * Node ids must equal their position in `nodes`. Duplicate edges are
     * merged. Acyclicity is checked lazily by critical_path().
     */
    static Qodg from_edges(std::vector<QodgNode> nodes, NodeId start, NodeId end,
                           const std::vector<std::pair<NodeId, NodeId>>& edges) {
        Qodg g;
        g.nodes_ = std::move(nodes);
        for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
            if (g.nodes_[i].id != i) throw GraphError("node ids must match their position");
        }
        if (start >= g.nodes_.size() || end >= g.nodes_.size() || start == end) {
            throw GraphError("invalid start/end node");
        }
        g.start_ = start;
        g.end_ = end;
        g.succ_.assign(g.nodes_.size(), {});
        g.pred_.assign(g.nodes_.size(), {});
        g.delay_.assign(g.nodes_.size(), 0.0);
        for (auto [u, v] : edges) {
            if (u >= g.nodes_.size() || v >= g.nodes_.size()) throw GraphError("edge endpoint out of range");
            if (v == start) throw GraphError("start node must have in-degree 0");
            if (u == end) throw GraphError("end node must have out-degree 0");
            g.add_edge(u, v);
        }
        return g;
    }

    [[nodiscard]] const std::vector<QodgNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const QodgNode& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
    [[nodiscard]] NodeId start() const noexcept { return start_; }
    [[nodiscard]] NodeId end() const noexcept { return end_; }
    [[nodiscard]] const std::vector<NodeId>& successors(NodeId id) const { return succ_.at(id); }
    [[nodiscard]] const std::vector<NodeId>& predecessors(NodeId id) const { return pred_.at(id); }
    [[nodiscard]] double delay(NodeId id) const { return delay_.at(id); }
    [[nodiscard]] const std::vector<double>& delays() const noexcept { return delay_; }

    void set_delay(NodeId id, double d) { delay_.at(id) = d; }

    [[nodiscard]] bool is_dummy(NodeId id) const noexcept { return id == start_ || id == end_; }

private:
    friend Qodg build_qodg(const Circuit& c);

    void add_edge(NodeId u, NodeId v) {
        // Gate nodes have at most two neighbours per side, so scan the short list.
        const auto& probe = succ_[u].size() <= pred_[v].size() ? succ_[u] : pred_[v];
        NodeId needle = succ_[u].size() <= pred_[v].size() ? v : u;
        if (std::find(probe.begin(), probe.end(), needle) != probe.end()) return;
        succ_[u].push_back(v);
        pred_[v].push_back(u);
        ++edge_count_;
    }

    std::vector<QodgNode> nodes_;
    std::vector<std::vector<NodeId>> succ_;
    std::vector<std::vector<NodeId>> pred_;
    std::vector<double> delay_;
    NodeId start_ = 0;
    NodeId end_ = 0;
    std::size_t edge_count_ = 0;
};

/// Build the QODG of an FT circuit by chaining each qubit's successive gates.
[[nodiscard]] inline Qodg build_qodg(const Circuit& c) {
    if (!c.is_fault_tolerant()) throw CircuitError("QODG requires an FT-lowered circuit");

    const auto n = static_cast<NodeId>(c.size());
    Qodg g;
    g.start_ = 0;
    g.end_ = n + 1;
    g.nodes_.resize(n + 2);
    g.succ_.assign(n + 2, {});
    g.pred_.assign(n + 2, {});
    g.delay_.assign(n + 2, 0.0);
    g.nodes_[0].id = 0;
    g.nodes_[n + 1].id = n + 1;

    std::vector<NodeId> last(c.qubit_count(), g.start_);
    for (NodeId i = 0; i < n; ++i) {
        const Gate& gate = c.gates()[i];
        NodeId id = i + 1;
        g.nodes_[id] = QodgNode{id, gate.kind, gate.operands};
        for (Qubit q : gate.operands) {
            g.add_edge(last[q], id);
            last[q] = id;
        }
    }
    bool any = false;
    for (NodeId tail : last) {
        if (tail == g.start_) continue;
        g.add_edge(tail, g.end_);
        any = true;
    }
    if (!any) g.add_edge(g.start_, g.end_);
    return g;
}

/**
 * @brief Attach node delays: gate delay plus average routing latency.
 *
 * CNOT nodes get d_CNOT + l_cnot_avg, one-qubit nodes d_g + l_g_avg, dummies 0.
 */
[[nodiscard]] inline Qodg update_delays(Qodg g, const FabricConfig& cfg, double l_cnot_avg, double l_g_avg) {
    if (l_cnot_avg < 0.0 || l_g_avg < 0.0) throw ConfigError("routing latencies must be non-negative");
    for (const QodgNode& n : g.nodes()) {
        if (!n.op) {
            g.set_delay(n.id, 0.0);
        } else if (*n.op == GateKind::Cnot) {
            g.set_delay(n.id, cfg.delay(GateKind::Cnot) + l_cnot_avg);
        } else {
            g.set_delay(n.id, cfg.delay(*n.op) + l_g_avg);
        }
    }
    return g;
}

struct CriticalCounts {
    std::size_t n_cnot = 0;
    std::map<GateKind, std::size_t> n_one_qubit;
    double path_length = 0.0;
    std::vector<NodeId> path;  // START ... END

    [[nodiscard]] std::size_t total() const noexcept {
        std::size_t t = n_cnot;
        for (const auto& [k, v] : n_one_qubit) t += v;
        return t;
    }
};

/**
 * @brief Longest START->END path by summed node delays.
 *
 * One pass in topological order. Among equal-length predecessors the one with
 * the lowest node id is kept, so the reported path is deterministic.
 */
[[nodiscard]] inline CriticalCounts critical_path(const Qodg& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> indeg(n);
    for (NodeId v = 0; v < n; ++v) indeg[v] = g.predecessors(v).size();

    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        if (indeg[v] == 0) order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (NodeId w : g.successors(order[head])) {
            if (--indeg[w] == 0) order.push_back(w);
        }
    }
    if (order.size() != n) throw GraphError("dependency graph contains a cycle");

    constexpr double kUnreached = -std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kUnreached);
    std::vector<NodeId> best(n, std::numeric_limits<NodeId>::max());
    dist[g.start()] = g.delay(g.start());
    for (NodeId v : order) {
        if (v == g.start()) continue;
        double top = kUnreached;
        NodeId arg = std::numeric_limits<NodeId>::max();
        for (NodeId p : g.predecessors(v)) {
            if (dist[p] > top || (dist[p] == top && dist[p] != kUnreached && p < arg)) {
                top = dist[p];
                arg = p;
            }
        }
        if (top == kUnreached) continue;
        dist[v] = top + g.delay(v);
        best[v] = arg;
    }
    if (dist[g.end()] == kUnreached) throw GraphError("end node unreachable from start node");

    CriticalCounts out;
    out.path_length = dist[g.end()];
    for (NodeId v = g.end();; v = best[v]) {
        out.path.push_back(v);
        if (v == g.start()) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    for (NodeId v : out.path) {
        const auto& op = g.node(v).op;
        if (!op) continue;
        if (*op == GateKind::Cnot) {
            ++out.n_cnot;
        } else {
            ++out.n_one_qubit[*op];
        }
    }
    return out;
}

/**
 * @brief critical_path(update_delays(build_qodg(c), ...)) without building
 * the graph.
 *
 * A gate's predecessors are the last gates on its operands, so one pass with
 * a per-qubit "last gate" table gives the same longest path, node ids and
 * tie-breaking as the graph version.
 */
[[nodiscard]] inline CriticalCounts critical_path(const Circuit& c, const FabricConfig& cfg, double l_cnot_avg,
                                                  double l_g_avg) {
    if (!c.is_fault_tolerant()) throw CircuitError("QODG requires an FT-lowered circuit");
    if (l_cnot_avg < 0.0 || l_g_avg < 0.0) throw ConfigError("routing latencies must be non-negative");

    std::array<double, kFtKindCount> node_delay{};
    for (std::size_t k = 0; k < kFtKindCount; ++k) {
        node_delay[k] = cfg.delay(kFtKinds[k]) + (kFtKinds[k] == GateKind::Cnot ? l_cnot_avg : l_g_avg);
    }
    auto slot = [](GateKind k) {
        return static_cast<std::size_t>(std::find(kFtKinds.begin(), kFtKinds.end(), k) - kFtKinds.begin());
    };
    std::array<std::size_t, 16> kind_slot{};
    for (GateKind k : kFtKinds) kind_slot[static_cast<std::size_t>(k)] = slot(k);

    const auto n = static_cast<NodeId>(c.size());
    std::vector<double> dist(n + 1, 0.0);  // dist[0] is START
    std::vector<NodeId> best(n + 1, 0);
    std::vector<NodeId> last(c.qubit_count(), 0);
    for (NodeId i = 0; i < n; ++i) {
        const Gate& gate = c.gates()[i];
        NodeId arg = last[gate.operands[0]];
        for (std::size_t k = 1; k < gate.operands.size(); ++k) {
            const NodeId p = last[gate.operands[k]];
            if (dist[p] > dist[arg] || (dist[p] == dist[arg] && p < arg)) arg = p;
        }
        const NodeId id = i + 1;
        dist[id] = dist[arg] + node_delay[kind_slot[static_cast<std::size_t>(gate.kind)]];
        best[id] = arg;
        for (Qubit q : gate.operands) last[q] = id;
    }

    CriticalCounts out;
    NodeId tail = 0;
    bool any = false;
    for (NodeId t : last) {
        if (t == 0) continue;
        if (!any || dist[t] > dist[tail] || (dist[t] == dist[tail] && t < tail)) tail = t;
        any = true;
    }
    out.path_length = dist[tail];
    out.path.push_back(n + 1);
    for (NodeId v = tail;; v = best[v]) {
        out.path.push_back(v);
        if (v == 0) break;
        const GateKind k = c.gates()[v - 1].kind;
        if (k == GateKind::Cnot) {
            ++out.n_cnot;
        } else {
            ++out.n_one_qubit[k];
        }
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

/// Node and edge counts of build_qodg(c), computed without building it.
[[nodiscard]] inline std::pair<std::size_t, std::size_t> qodg_shape(const Circuit& c) {
    std::vector<NodeId> last(c.qubit_count(), 0);
    std::size_t edges = 0;
    for (NodeId i = 0; i < c.size(); ++i) {
        const auto& ops = c.gates()[i].operands;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            bool repeat = false;
            for (std::size_t j = 0; j < k; ++j) repeat = repeat || last[ops[j]] == last[ops[k]];
            if (!repeat) ++edges;
        }
        for (Qubit q : ops) last[q] = i + 1;
    }
    std::size_t tails = 0;
    std::vector<NodeId> seen;
    for (NodeId t : last) {
        if (t != 0) seen.push_back(t);
    }
    std::sort(seen.begin(), seen.end());
    tails = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    edges += tails == 0 ? 1 : tails;
    return {c.size() + 2, edges};
}

/// Graphviz dump; nodes on `critical` (if given) are drawn in red.
[[nodiscard]] inline std::string to_dot(const Qodg& g, const CriticalCounts* critical = nullptr) {
    std::vector<bool> on_path(g.node_count(), false);
    if (critical) {
        for (NodeId v : critical->path) on_path[v] = true;
    }
    std::ostringstream out;
    out << "digraph qodg {\n";
    for (const QodgNode& n : g.nodes()) {
        std::string label = n.id == g.start() ? "start" : n.id == g.end() ? "end" : "";
        if (n.op) {
            label = std::to_string(n.id) + ": " + std::string(mnemonic(*n.op));
            for (Qubit q : n.operands) label += " q" + std::to_string(q);
        }
        out << "  n" << n.id << " [label=\"" << label << "\"";
        if (on_path[n.id]) out << ", color=red";
        out << "];\n";
    }
    for (const QodgNode& n : g.nodes()) {
        for (NodeId w : g.successors(n.id)) {
            out << "  n" << n.id << " -> n" << w;
            if (on_path[n.id] && on_path[w]) out << " [color=red]";
            out << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace leqa
