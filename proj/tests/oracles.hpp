#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the code paths it is used to check.

#include <leqa/circuit.hpp>
#include <leqa/qodg.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace leqa::oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;  // [row][col]

/// Apply one FT gate to a state vector; qubit i is bit i of the basis index.
inline void apply(std::vector<cplx>& psi, const Gate& g) {
    const std::size_t dim = psi.size();
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    const cplx w = std::polar(1.0, M_PI / 4.0);
    if (g.kind == GateKind::Cnot) {
        const std::size_t c = std::size_t{1} << g.operands[0];
        const std::size_t t = std::size_t{1} << g.operands[1];
        for (std::size_t k = 0; k < dim; ++k) {
            if ((k & c) && !(k & t)) std::swap(psi[k], psi[k | t]);
        }
        return;
    }
    cplx m00, m01, m10, m11;
    switch (g.kind) {
        case GateKind::X:
        case GateKind::Not: m00 = 0; m01 = 1; m10 = 1; m11 = 0; break;
        case GateKind::Y: m00 = 0; m01 = -i; m10 = i; m11 = 0; break;
        case GateKind::Z: m00 = 1; m01 = 0; m10 = 0; m11 = -1; break;
        case GateKind::H: m00 = r; m01 = r; m10 = r; m11 = -r; break;
        case GateKind::S: m00 = 1; m01 = 0; m10 = 0; m11 = i; break;
        case GateKind::T: m00 = 1; m01 = 0; m10 = 0; m11 = w; break;
        case GateKind::Tdag: m00 = 1; m01 = 0; m10 = 0; m11 = std::conj(w); break;
        default: throw std::logic_error("oracle::apply: not an FT gate");
    }
    const std::size_t bit = std::size_t{1} << g.operands[0];
    for (std::size_t k = 0; k < dim; ++k) {
        if (k & bit) continue;
        const cplx a = psi[k], b = psi[k | bit];
        psi[k] = m00 * a + m01 * b;
        psi[k | bit] = m10 * a + m11 * b;
    }
}

/// Full unitary of an FT gate list on n qubits.
inline Matrix unitary(const std::vector<Gate>& gates, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix u(dim, std::vector<cplx>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<cplx> psi(dim);
        psi[col] = 1.0;
        for (const Gate& g : gates) apply(psi, g);
        for (std::size_t row = 0; row < dim; ++row) u[row][col] = psi[row];
    }
    return u;
}

/// Permutation matrix of a classical reversible map on n bits.
inline Matrix permutation(std::size_t n, const std::function<std::uint64_t(std::uint64_t)>& f) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix u(dim, std::vector<cplx>(dim));
    for (std::size_t col = 0; col < dim; ++col) u[f(col)][col] = 1.0;
    return u;
}

/// max |a - e^{i phi} b| with phi chosen from the largest entry of b.
inline double distance_up_to_phase(const Matrix& a, const Matrix& b) {
    std::size_t br = 0, bc = 0;
    for (std::size_t r = 0; r < b.size(); ++r) {
        for (std::size_t c = 0; c < b.size(); ++c) {
            if (std::abs(b[r][c]) > std::abs(b[br][bc])) {
                br = r;
                bc = c;
            }
        }
    }
    const cplx phase = a[br][bc] / b[br][bc];
    double worst = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a.size(); ++c) worst = std::max(worst, std::abs(a[r][c] - phase * b[r][c]));
    }
    return worst;
}

/// Classical simulation of NOT/X/CNOT/TOFFOLI/FREDKIN on a basis state.
inline std::uint64_t classical(const std::vector<Gate>& gates, std::uint64_t state) {
    auto bit = [&](Qubit q) { return (state >> q) & 1U; };
    for (const Gate& g : gates) {
        const auto& o = g.operands;
        switch (g.kind) {
            case GateKind::X:
            case GateKind::Not: state ^= std::uint64_t{1} << o[0]; break;
            case GateKind::Cnot:
                if (bit(o[0])) state ^= std::uint64_t{1} << o[1];
                break;
            case GateKind::Toffoli: {
                bool all = true;
                for (std::size_t k = 0; k + 1 < o.size(); ++k) all = all && bit(o[k]);
                if (all) state ^= std::uint64_t{1} << o.back();
                break;
            }
            case GateKind::Fredkin: {
                bool all = true;
                for (std::size_t k = 0; k + 2 < o.size(); ++k) all = all && bit(o[k]);
                const Qubit a = o[o.size() - 2], b = o[o.size() - 1];
                if (all && bit(a) != bit(b)) state ^= (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
                break;
            }
            default: throw std::logic_error("oracle::classical: non-classical gate");
        }
    }
    return state;
}

/// Longest START->END path by exhaustive DFS over all paths.
inline double brute_force_longest(const Qodg& g) {
    double best = -1.0;
    std::function<void(NodeId, double)> dfs = [&](NodeId v, double acc) {
        acc += g.delay(v);
        if (v == g.end()) {
            best = std::max(best, acc);
            return;
        }
        for (NodeId w : g.successors(v)) dfs(w, acc);
    };
    dfs(g.start(), 0.0);
    return best;
}

// Random DAG with integer delays: node 0 = START, n+1 = END, gates 1..n.
inline Qodg random_dag(std::mt19937_64& rng, std::size_t n, double edge_p) {
    std::vector<QodgNode> nodes(n + 2);
    for (NodeId i = 0; i < n + 2; ++i) nodes[i].id = i;
    std::uniform_int_distribution<int> kind(0, 7);
    for (NodeId i = 1; i <= n; ++i) nodes[i].op = kFtKinds[static_cast<std::size_t>(kind(rng))];

    std::bernoulli_distribution edge(edge_p);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<bool> has_in(n + 2, false), has_out(n + 2, false);
    for (NodeId i = 1; i <= n; ++i) {
        for (NodeId j = i + 1; j <= n; ++j) {
            if (edge(rng)) {
                edges.emplace_back(i, j);
                has_out[i] = has_in[j] = true;
            }
        }
    }
    for (NodeId i = 1; i <= n; ++i) {
        if (!has_in[i]) edges.emplace_back(0, i);
        if (!has_out[i]) edges.emplace_back(i, static_cast<NodeId>(n + 1));
    }
    if (n == 0) edges.emplace_back(0, 1);
    Qodg g = Qodg::from_edges(std::move(nodes), 0, static_cast<NodeId>(n + 1), edges);
    std::uniform_int_distribution<int> delay(1, 20);
    for (NodeId i = 1; i <= n; ++i) g.set_delay(i, delay(rng));
    return g;
}

/// Coverage probability by enumerating every placement of an s x s zone.
inline std::vector<std::vector<double>> enumerate_coverage(std::size_t a, std::size_t b, std::size_t s) {
    std::vector<std::vector<std::size_t>> hits(a, std::vector<std::size_t>(b, 0));
    std::size_t placements = 0;
    for (std::size_t x0 = 0; x0 + s <= a; ++x0) {
        for (std::size_t y0 = 0; y0 + s <= b; ++y0) {
            ++placements;
            for (std::size_t x = x0; x < x0 + s; ++x) {
                for (std::size_t y = y0; y < y0 + s; ++y) ++hits[x][y];
            }
        }
    }
    std::vector<std::vector<double>> p(a, std::vector<double>(b));
    for (std::size_t x = 0; x < a; ++x) {
        for (std::size_t y = 0; y < b; ++y) p[x][y] = static_cast<double>(hits[x][y]) / static_cast<double>(placements);
    }
    return p;
}

struct SampleStats {
    std::vector<double> mean;
    std::vector<double> std_error;
};

/**
 * Monte Carlo estimate of S_q (cells covered by exactly q zones) for
 * q = 0..zones, placing `zones` s x s squares uniformly on an a x b grid.
 */
inline SampleStats sample_coverage(std::size_t a, std::size_t b, std::size_t s, std::size_t zones,
                                   std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> px(0, a - s);
    std::uniform_int_distribution<std::size_t> py(0, b - s);
    std::vector<double> sum(zones + 1, 0.0), sum_sq(zones + 1, 0.0);
    std::vector<std::size_t> count(a * b);
    std::vector<std::size_t> hist(zones + 1);
    for (std::size_t t = 0; t < trials; ++t) {
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t z = 0; z < zones; ++z) {
            const std::size_t x0 = px(rng), y0 = py(rng);
            for (std::size_t x = x0; x < x0 + s; ++x) {
                for (std::size_t y = y0; y < y0 + s; ++y) ++count[x * b + y];
            }
        }
        std::fill(hist.begin(), hist.end(), 0);
        for (auto c : count) ++hist[c];
        for (std::size_t q = 0; q <= zones; ++q) {
            const auto v = static_cast<double>(hist[q]);
            sum[q] += v;
            sum_sq[q] += v * v;
        }
    }
    SampleStats out;
    const auto n = static_cast<double>(trials);
    for (std::size_t q = 0; q <= zones; ++q) {
        const double m = sum[q] / n;
        const double var = std::max(0.0, (sum_sq[q] / n - m * m) * n / (n - 1.0));
        out.mean.push_back(m);
        out.std_error.push_back(std::sqrt(var / n));
    }
    return out;
}

/// n! / (q! (n-q)!) via 128-bit factorials (exact for n <= 33).
inline unsigned __int128 factorial_binomial(unsigned n, unsigned q) {
    auto fact = [](unsigned k) {
        unsigned __int128 f = 1;
        for (unsigned i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return fact(n) / (fact(q) * fact(n - q));
}

/// Spearman rank correlation (no tie correction needed for continuous data).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const auto n = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace leqa::oracle
