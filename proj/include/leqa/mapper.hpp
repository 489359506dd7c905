#pragma once

/**
 * @file mapper.hpp
 * @brief Reference scheduler / placer / router on the tiled fabric.
 *
 * A deliberately simple, deterministic mapper used as the "actual latency"
 * baseline the estimator is compared and calibrated against:
 *
 *  - qubits start on distinct ULBs chosen uniformly at random (seeded);
 *  - QODG-ready operations are dispatched earliest-ready first, ties by id;
 *  - a one-qubit operation runs in its qubit's ULB, or the nearby ULB that
 *    lets it start earliest;
 *  - a CNOT meets at the Manhattan midpoint of its operands (smaller
 *    coordinates on ties), or the nearby ULB that lets it start earliest;
 *  - qubits move X-then-Y, one T_move per hop, through channel segments
 *    that carry at most N_c qubits at a time; excess qubits wait FIFO;
 *  - a ULB executes one operation at a time.
 */

#include "circuit.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "fabric.hpp"
#include "qodg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace leqa {

struct Coord {
    std::size_t x = 0;
    std::size_t y = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

[[nodiscard]] inline std::size_t manhattan(Coord a, Coord b) noexcept {
    auto d = [](std::size_t u, std::size_t v) { return u > v ? u - v : v - u; };
    return d(a.x, b.x) + d(a.y, b.y);
}

enum class TraceKind { Hop, Start, Finish };

struct TraceEvent {
    double time = 0.0;
    TraceKind kind = TraceKind::Hop;
    std::uint32_t subject = 0;  // qubit for hops, gate index otherwise
    Coord location;             // hop destination or executing ULB
};

/// One qubit crossing one channel segment during [begin, end).
struct ChannelUse {
    std::size_t segment = 0;
    double begin = 0.0;
    double end = 0.0;
};

struct MappingOptions {
    std::uint64_t seed = 1;
    bool trace = false;
    /// Overrides the random initial placement (one distinct ULB per qubit).
    std::optional<std::vector<Coord>> placement;
    /// Manhattan radius searched for an alternative ULB when the preferred one is busy.
    std::size_t search_radius = 2;
};

struct MappingResult {
    double latency = 0.0;            // us; max finish time
    std::vector<double> start;       // per gate
    std::vector<double> finish;      // per gate
    std::size_t total_hops = 0;
    std::size_t max_channel_queue = 0;
    double max_channel_wait = 0.0;   // us
    std::vector<TraceEvent> trace;        // only with MappingOptions::trace
    std::vector<ChannelUse> channel_use;  // only with MappingOptions::trace
};

namespace detail {

class FabricState {
public:
    FabricState(const FabricConfig& cfg, bool record)
        : width_(cfg.width),
          length_(cfg.length),
          capacity_(cfg.channel_capacity),
          t_move_(cfg.t_move),
          record_(record),
          busy_(cfg.width * cfg.length, 0.0),
          lanes_(segment_count() * cfg.channel_capacity, 0.0),
          active_(segment_count()) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] double busy_until(Coord c) const noexcept { return busy_[c.x * length_ + c.y]; }
    void occupy(Coord c, double until) noexcept { busy_[c.x * length_ + c.y] = until; }

    void set_clock(double t) noexcept { clock_ = t; }

    /// Move a qubit X-then-Y starting no earlier than `t`; returns the arrival time.
    double route(Qubit q, Coord from, Coord to, double t, MappingResult& out) {
        Coord at = from;
        while (!(at == to)) {
            Coord next = at;
            if (at.x != to.x) {
                next.x = at.x < to.x ? at.x + 1 : at.x - 1;
            } else {
                next.y = at.y < to.y ? at.y + 1 : at.y - 1;
            }
            t = hop(segment(at, next), t, out);
            ++out.total_hops;
            if (record_) out.trace.push_back({t - t_move_, TraceKind::Hop, q, next});
            at = next;
        }
        return t;
    }

private:
    [[nodiscard]] std::size_t horizontal_count() const noexcept { return (width_ - 1) * length_; }
    [[nodiscard]] std::size_t segment_count() const noexcept {
        return horizontal_count() + width_ * (length_ - 1);
    }

    [[nodiscard]] std::size_t segment(Coord a, Coord b) const noexcept {
        if (a.y == b.y) return std::min(a.x, b.x) * length_ + a.y;
        return horizontal_count() + a.x * (length_ - 1) + std::min(a.y, b.y);
    }

    double hop(std::size_t seg, double t, MappingResult& out) {
        auto first = lanes_.begin() + static_cast<std::ptrdiff_t>(seg * capacity_);
        auto lane = std::min_element(first, first + static_cast<std::ptrdiff_t>(capacity_));
        const double begin = std::max(t, *lane);

        auto& active = active_[seg];
        std::erase_if(active, [&](const std::pair<double, double>& iv) { return iv.second <= clock_; });
        if (begin > t) {
            std::size_t ahead = 1;
            for (const auto& iv : active) {
                if (iv.first > t) ++ahead;
            }
            out.max_channel_queue = std::max(out.max_channel_queue, ahead);
            out.max_channel_wait = std::max(out.max_channel_wait, begin - t);
        }
        active.emplace_back(begin, begin + t_move_);

        *lane = begin + t_move_;
        if (record_) out.channel_use.push_back({seg, begin, begin + t_move_});
        return begin + t_move_;
    }

    std::size_t width_;
    std::size_t length_;
    std::size_t capacity_;
    double t_move_;
    bool record_;
    double clock_ = 0.0;
    std::vector<double> busy_;
    std::vector<double> lanes_;  // per segment, N_c lanes holding their free-at time
    std::vector<std::vector<std::pair<double, double>>> active_;
};

inline std::vector<Coord> random_placement(std::size_t qubits, std::size_t width, std::size_t length,
                                           std::uint64_t seed) {
    std::vector<std::size_t> cells(width * length);
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first `qubits` slots become a uniform sample.
    for (std::size_t i = 0; i < qubits; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
        std::swap(cells[i], cells[pick(rng)]);
    }
    std::vector<Coord> out(qubits);
    for (std::size_t i = 0; i < qubits; ++i) out[i] = {cells[i] / length, cells[i] % length};
    return out;
}

}  // namespace detail

/// Simulate the mapping of an FT circuit and return its latency.
[[nodiscard]] inline MappingResult simulate(const Circuit& c, const FabricConfig& cfg, const MappingOptions& opt) {
    cfg.validate();
    if (!c.is_fault_tolerant()) throw CircuitError("simulate requires an FT-lowered circuit");
    if (c.qubit_count() > cfg.area()) {
        throw ConfigError("fabric too small: " + std::to_string(c.qubit_count()) + " qubits on " +
                          std::to_string(cfg.area()) + " ULBs");
    }

    std::vector<Coord> position;
    if (opt.placement) {
        position = *opt.placement;
        if (position.size() != c.qubit_count()) throw ConfigError("placement size does not match qubit count");
        std::vector<std::size_t> cells;
        for (Coord p : position) {
            if (p.x >= cfg.width || p.y >= cfg.length) throw ConfigError("placement outside the fabric");
            cells.push_back(p.x * cfg.length + p.y);
        }
        std::sort(cells.begin(), cells.end());
        if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) {
            throw ConfigError("placement puts two qubits on one ULB");
        }
    } else {
        position = detail::random_placement(c.qubit_count(), cfg.width, cfg.length, opt.seed);
    }

    const Qodg g = build_qodg(c);
    MappingResult out;
    out.start.assign(c.size(), 0.0);
    out.finish.assign(c.size(), 0.0);
    detail::FabricState fabric(cfg, opt.trace);

    // Pick the ULB within the search radius of `centre` that lets the operation
    // start earliest; ties prefer the centre, then smaller coordinates.
    auto choose_ulb = [&](Coord centre, double ready, auto&& travel_hops) {
        Coord best = centre;
        double best_start = std::max(ready + static_cast<double>(travel_hops(centre)) * cfg.t_move,
                                     fabric.busy_until(centre));
        std::size_t best_dist = 0;
        if (fabric.busy_until(centre) <= ready) return best;
        const auto r = static_cast<std::ptrdiff_t>(opt.search_radius);
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
            for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
                const auto dist = static_cast<std::size_t>(std::abs(dx) + std::abs(dy));
                if (dist == 0 || dist > opt.search_radius) continue;
                const auto x = static_cast<std::ptrdiff_t>(centre.x) + dx;
                const auto y = static_cast<std::ptrdiff_t>(centre.y) + dy;
                if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(cfg.width) ||
                    y >= static_cast<std::ptrdiff_t>(cfg.length)) {
                    continue;
                }
                const Coord cand{static_cast<std::size_t>(x), static_cast<std::size_t>(y)};
                const double s = std::max(ready + static_cast<double>(travel_hops(cand)) * cfg.t_move,
                                          fabric.busy_until(cand));
                const bool better = s < best_start ||
                                    (s == best_start && (dist < best_dist ||
                                                         (dist == best_dist && (cand.x < best.x ||
                                                                                (cand.x == best.x && cand.y < best.y)))));
                if (better) {
                    best = cand;
                    best_start = s;
                    best_dist = dist;
                }
            }
        }
        return best;
    };

    std::vector<std::size_t> pending(g.node_count());
    std::vector<double> ready(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) pending[v] = g.predecessors(v).size();

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    auto release = [&](NodeId v, double finish) {
        for (NodeId w : g.successors(v)) {
            ready[w] = std::max(ready[w], finish);
            if (--pending[w] == 0) queue.emplace(ready[w], w);
        }
    };
    release(g.start(), 0.0);

    while (!queue.empty()) {
        const auto [t, id] = queue.top();
        queue.pop();
        if (id == g.end()) continue;
        fabric.set_clock(t);

        const std::size_t gi = id - 1;
        const Gate& gate = c.gates()[gi];
        const double duration = cfg.delay(gate.kind);
        double begin = 0.0;
        Coord site;

        if (gate.kind == GateKind::Cnot) {
            const Qubit qc = gate.operands[0];
            const Qubit qt = gate.operands[1];
            const Coord pc = position[qc];
            const Coord pt = position[qt];
            const Coord mid{(pc.x + pt.x) / 2, (pc.y + pt.y) / 2};
            site = choose_ulb(mid, t, [&](Coord u) { return std::max(manhattan(pc, u), manhattan(pt, u)); });
            const double arrive_c = fabric.route(qc, pc, site, t, out);
            const double arrive_t = fabric.route(qt, pt, site, t, out);
            begin = std::max({arrive_c, arrive_t, fabric.busy_until(site)});
            position[qc] = site;
            position[qt] = site;
        } else {
            const Qubit q = gate.operands[0];
            const Coord p = position[q];
            site = choose_ulb(p, t, [&](Coord u) { return manhattan(p, u); });
            const double arrive = fabric.route(q, p, site, t, out);
            begin = std::max(arrive, fabric.busy_until(site));
            position[q] = site;
        }

        const double end = begin + duration;
        fabric.occupy(site, end);
        out.start[gi] = begin;
        out.finish[gi] = end;
        out.latency = std::max(out.latency, end);
        if (opt.trace) {
            out.trace.push_back({begin, TraceKind::Start, static_cast<std::uint32_t>(gi), site});
            out.trace.push_back({end, TraceKind::Finish, static_cast<std::uint32_t>(gi), site});
        }
        release(id, end);
    }
    return out;
}

[[nodiscard]] inline MappingResult simulate(const Circuit& c, const FabricConfig& cfg, std::uint64_t seed) {
    MappingOptions opt;
    opt.seed = seed;
    return simulate(c, cfg, opt);
}

/// CSV event trace: time,event,subject,x,y (sorted by time, stable).
[[nodiscard]] inline std::string trace_csv(const MappingResult& r) {
    std::vector<TraceEvent> events = r.trace;
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    std::ostringstream out;
    out << "time_us,event,subject,x,y\n";
    for (const auto& e : events) {
        const char* kind = e.kind == TraceKind::Hop ? "hop" : e.kind == TraceKind::Start ? "start" : "finish";
        out << e.time << ',' << kind << ',' << e.subject << ',' << e.location.x << ',' << e.location.y << '\n';
    }
    return out.str();
}

/// Mean |estimate - actual| / actual over paired circuits.
[[nodiscard]] inline double mean_abs_rel_error(std::span<const Circuit> circuits, std::span<const double> actual,
                                               const FabricConfig& cfg) {
    if (circuits.size() != actual.size() || circuits.empty()) throw Error("mean_abs_rel_error: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        sum += std::abs(estimate(circuits[i], cfg).latency - actual[i]) / actual[i];
    }
    return sum / static_cast<double>(circuits.size());
}

struct CalibrationResult {
    double speed = 0.0;
    double training_error = 0.0;  // mean absolute relative error at `speed`
    std::size_t evaluations = 0;
};

inline constexpr double kCalibrationLogLow = -5.0;   // log10 v
inline constexpr double kCalibrationLogHigh = -1.0;

/**
 * @brief Fit the qubit speed v so estimates match known latencies.
 *
 * Golden-section search on log10(v) over [1e-5, 1e-1] minimising the mean
 * absolute relative error. Throws when no estimate depends on v.
 */
[[nodiscard]] inline CalibrationResult calibrate_v_against(std::span<const Circuit> training,
                                                           std::span<const double> actual, FabricConfig cfg,
                                                           double log_tolerance = 1e-4) {
    if (training.empty()) throw Error("calibration needs at least one training circuit");
    CalibrationResult r;
    auto objective = [&](double log_v) {
        cfg.speed = std::pow(10.0, log_v);
        ++r.evaluations;
        return mean_abs_rel_error(training, actual, cfg);
    };

    bool depends = false;
    for (const Circuit& c : training) {
        cfg.speed = std::pow(10.0, kCalibrationLogLow);
        const double slow = estimate(c, cfg).latency;
        cfg.speed = std::pow(10.0, kCalibrationLogHigh);
        const double fast = estimate(c, cfg).latency;
        if (slow != fast) depends = true;
    }
    if (!depends) throw Error("degenerate training set: estimates do not depend on v");

    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = kCalibrationLogLow;
    double hi = kCalibrationLogHigh;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > log_tolerance) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    const double best = f1 <= f2 ? x1 : x2;
    r.speed = std::pow(10.0, best);
    r.training_error = std::min(f1, f2);
    return r;
}

/// Simulate each training circuit with `seed`, then calibrate against the results.
[[nodiscard]] inline CalibrationResult calibrate_v(std::span<const Circuit> training, const FabricConfig& cfg,
                                                   std::uint64_t seed = 1) {
    std::vector<double> actual;
    actual.reserve(training.size());
    for (const Circuit& c : training) actual.push_back(simulate(c, cfg, seed).latency);
    return calibrate_v_against(training, actual, cfg);
}

}  // namespace leqa
