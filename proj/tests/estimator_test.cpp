#include "oracles.hpp"

#include <leqa/estimator.hpp>
#include <leqa/generator.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace leqa;

namespace {

Gate cx(Qubit a, Qubit b) { return make_gate(GateKind::Cnot, {a, b}); }

}  // namespace

TEST(Binomial, SmallValues) {
    EXPECT_EQ(binomial(5, 0), 1.0);
    EXPECT_EQ(binomial(5, 2), 10.0);
    EXPECT_EQ(binomial(30, 15), 155117520.0);
    EXPECT_THROW((void)binomial(3, 4), Error);
}

TEST(Binomial, MatchesFactorialOracle) {
    for (unsigned n = 0; n <= 33; ++n) {
        for (unsigned q = 0; q <= n; ++q) {
            const auto exact = static_cast<double>(oracle::factorial_binomial(n, q));
            EXPECT_NEAR(binomial(n, q), exact, exact * 1e-13) << n << " " << q;
        }
    }
}

TEST(Coverage, SmallGrids) {
    const CoverageGrid one = coverage_for_side(3, 3, 1);
    for (std::size_t x = 1; x <= 3; ++x) {
        for (std::size_t y = 1; y <= 3; ++y) EXPECT_DOUBLE_EQ(one.at(x, y), 1.0 / 9.0);
    }
    const CoverageGrid two = coverage_for_side(3, 3, 2);
    EXPECT_DOUBLE_EQ(two.at(2, 2), 1.0);
    EXPECT_DOUBLE_EQ(two.at(1, 1), 0.25);
    EXPECT_DOUBLE_EQ(two.at(1, 2), 0.5);
    const CoverageGrid full = coverage_for_side(3, 3, 3);
    for (auto n : full.numerators) EXPECT_EQ(n, full.placements);
    EXPECT_FALSE(full.clamped);
}

TEST(Coverage, ClampsOversizedZone) {
    const CoverageGrid g = coverage_for_side(4, 6, 9);
    EXPECT_TRUE(g.clamped);
    EXPECT_EQ(g.side, 4u);
    EXPECT_EQ(g.placements, 3u);
}

TEST(Coverage, SideFromArea) {
    EXPECT_EQ(zone_side_for_area(1.0), 1u);
    EXPECT_EQ(zone_side_for_area(4.0), 2u);
    EXPECT_EQ(zone_side_for_area(4.01), 3u);
    EXPECT_EQ(zone_side_for_area(0.0), 1u);
    EXPECT_EQ(coverage_probability(FabricConfig{}, 10.0).side, 4u);
}

TEST(Coverage, MatchesEnumerationAndSumsToZoneArea) {
    for (std::size_t a : {1, 2, 5, 8}) {
        for (std::size_t b : {1, 3, 7}) {
            for (std::size_t s = 1; s <= std::min(a, b); ++s) {
                const CoverageGrid g = coverage_for_side(a, b, s);
                const auto ref = oracle::enumerate_coverage(a, b, s);
                for (std::size_t x = 1; x <= a; ++x) {
                    for (std::size_t y = 1; y <= b; ++y) {
                        EXPECT_NEAR(g.at(x, y), ref[x - 1][y - 1], 1e-12);
                        EXPECT_GE(g.at(x, y), 0.0);
                        EXPECT_LE(g.at(x, y), 1.0);
                    }
                }
                EXPECT_NEAR(g.sum(), static_cast<double>(s * s), 1e-9);
            }
        }
    }
}

TEST(ExpectedCoverage, SingleZoneCoversZoneArea) {
    const CoverageGrid g = coverage_for_side(3, 3, 1);
    const auto s = expected_coverage(g, 1, 20);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0], 1.0);
}

TEST(ExpectedCoverage, TwoZonesOnThreeByThree) {
    const CoverageGrid g = coverage_for_side(3, 3, 1);
    const auto s = expected_coverage_range(g, 2, 0, 2);
    EXPECT_NEAR(s[1], 16.0 / 9.0, 1e-12);
    EXPECT_NEAR(s[2], 1.0 / 9.0, 1e-12);
    EXPECT_NEAR(s[0] + s[1] + s[2], 9.0, 1e-12);
}

TEST(ExpectedCoverage, ConservationOverAllLevels) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t a = 2 + rng() % 30, b = 2 + rng() % 30;
        const std::size_t s = 1 + rng() % std::min(a, b);
        const std::size_t qubits = 1 + rng() % 40;
        const CoverageGrid g = coverage_for_side(a, b, s);
        const auto all = expected_coverage_range(g, qubits, 0, qubits);
        double cells = 0.0, covered = 0.0;
        for (std::size_t q = 0; q <= qubits; ++q) {
            EXPECT_GE(all[q], 0.0);
            cells += all[q];
            covered += static_cast<double>(q) * all[q];
        }
        EXPECT_NEAR(cells, static_cast<double>(a * b), 1e-9 * static_cast<double>(a * b));
        EXPECT_NEAR(covered, static_cast<double>(qubits * s * s), 1e-9 * static_cast<double>(qubits * s * s));
    }
}

TEST(ExpectedCoverage, FullCoverageGivesAllCellsAtTopLevel) {
    const CoverageGrid g = coverage_for_side(3, 3, 3);
    const auto all = expected_coverage_range(g, 4, 0, 4);
    for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(all[q], 0.0);
    EXPECT_DOUBLE_EQ(all[4], 9.0);
}

TEST(ExpectedCoverage, AgreesWithMonteCarlo) {
    const std::size_t a = 12, b = 9, s = 3, zones = 15;
    const CoverageGrid g = coverage_for_side(a, b, s);
    const auto exact = expected_coverage_range(g, zones, 0, zones);
    const auto mc = oracle::sample_coverage(a, b, s, zones, 20000, 42);
    for (std::size_t q = 0; q <= zones; ++q) {
        EXPECT_NEAR(exact[q], mc.mean[q], 4.0 * mc.std_error[q] + 1e-3) << "q=" << q;
    }
}

TEST(ExpectedCoverage, TruncationAtTwentyIsNegligibleForTypicalLoads) {
    const FabricConfig cfg;
    const CoverageGrid g = coverage_for_side(cfg.width, cfg.length, 4);
    const auto head = expected_coverage(g, 60, 20);
    const auto all = expected_coverage(g, 60, 60);
    const double d = 1000.0;
    const double l20 = l_cnot_avg(head, cfg.channel_capacity, d).value;
    const double l60 = l_cnot_avg(all, cfg.channel_capacity, d).value;
    EXPECT_LT(std::abs(l20 - l60) / l60, 1e-9);
}

TEST(Hamiltonian, Values) {
    EXPECT_EQ(hamiltonian_estimate(1, 2.0), 0.0);
    EXPECT_NEAR(hamiltonian_estimate(4, 5.0), 3.7487, 1e-4);
    EXPECT_NEAR(hamiltonian_estimate(1, 2.0, PathFactor::Corrected),
                std::sqrt(2.0) * (0.713 * std::sqrt(2.0) + 0.641) / 2.0, 1e-12);
    EXPECT_THROW((void)hamiltonian_estimate(0, 1.0), Error);
}

TEST(Hamiltonian, TourConstantLiesBetweenBounds) {
    for (double n = 2.0; n <= 1000.0; n *= 1.5) {
        const double tour = kTourSlope * std::sqrt(n) + kTourIntercept;
        EXPECT_GE(tour, kTspLowerSlope * std::sqrt(n) + kTspLowerIntercept);
        EXPECT_LE(tour, kTspUpperSlope * std::sqrt(n) + kTspUpperIntercept);
    }
}

TEST(UncongestedDelay, StarCentre) {
    // Centre: M=4, B=5. Leaves: M=1 so their path estimate is zero.
    const ZoneStats zs = zone_stats(build_iig(Circuit(5, {cx(0, 1), cx(0, 2), cx(0, 3), cx(0, 4)})));
    const UncongestedDelay d = d_uncong_avg(zs, FabricConfig{});
    ASSERT_TRUE(d.per_qubit[0]);
    EXPECT_NEAR(*d.per_qubit[0], 937.2, 0.05);
    EXPECT_EQ(*d.per_qubit[1], 0.0);
    EXPECT_NEAR(d.average, *d.per_qubit[0] * 4.0 / 8.0, 1e-9);
}

TEST(Queue, DelayAndLittleLaw) {
    EXPECT_EQ(queue_delay(3, 5, 100.0), 100.0);
    EXPECT_EQ(queue_delay(5, 5, 100.0), 100.0);
    EXPECT_NEAR(queue_delay(10, 5, 100.0), 220.0, 1e-12);
    for (std::size_t q = 1; q <= 40; ++q) {
        const QueueModel m{5, 250.0};
        EXPECT_NEAR(m.mean_queue_length(q), static_cast<double>(q), 1e-9 * static_cast<double>(q));
        EXPECT_NEAR(m.waiting_time(q), m.mean_queue_length(q) / m.arrival_rate(q), 1e-9);
        EXPECT_GE(m.delay(q), 250.0);
        if (q > 1) EXPECT_GE(m.delay(q), m.delay(q - 1));
    }
}

TEST(RoutingAverage, WeightedMean) {
    std::vector<double> s(10, 0.0);
    s[0] = 3.0;
    s[9] = 1.0;
    EXPECT_NEAR(l_cnot_avg(s, 5, 100.0).value, 130.0, 1e-12);
    const std::vector<double> none(4, 0.0);
    EXPECT_TRUE(l_cnot_avg(none, 5, 100.0).degenerate);
}

TEST(RoutingAverage, MatchesMonteCarloSurfaces) {
    const std::size_t a = 20, b = 20, s = 4, zones = 40;
    const auto exact = expected_coverage(coverage_for_side(a, b, s), zones, 20);
    const auto mc = oracle::sample_coverage(a, b, s, zones, 5000, 7);
    const std::vector<double> mc_head(mc.mean.begin() + 1, mc.mean.begin() + 21);
    const double le = l_cnot_avg(exact, 5, 1000.0).value;
    const double lm = l_cnot_avg(mc_head, 5, 1000.0).value;
    EXPECT_NEAR(le, lm, 0.01 * le);
}

TEST(Estimate, SingleHadamard) {
    const auto r = estimate(Circuit(1, {make_gate(GateKind::H, {0})}), FabricConfig{});
    EXPECT_EQ(r.latency, 5640.0);
    EXPECT_FALSE(r.zone_area);
    EXPECT_EQ(r.l_cnot_avg, 0.0);
}

TEST(Estimate, SingleCnot) {
    const auto r = estimate(Circuit(2, {cx(0, 1)}), FabricConfig{});
    EXPECT_EQ(r.latency, 4930.0);  // M=1 gives a zero-length path
    FabricConfig corrected;
    corrected.path_factor = PathFactor::Corrected;
    const auto rc = estimate(Circuit(2, {cx(0, 1)}), corrected);
    EXPECT_GT(rc.l_cnot_avg, 0.0);
    EXPECT_DOUBLE_EQ(rc.latency, 4930.0 + rc.l_cnot_avg);
}

TEST(Estimate, RejectsUnloweredCircuit) {
    EXPECT_THROW((void)estimate(Circuit(3, {make_gate(GateKind::Toffoli, {0, 1, 2})}), FabricConfig{}), CircuitError);
}

TEST(Estimate, MatchesHandComputation) {
    const Circuit c = generate_random_circuit(16, 600, 0.4, 21);
    const FabricConfig cfg;
    const auto r = estimate(c, cfg);
    const ZoneStats zs = zone_stats(build_iig(c));
    const double d = d_uncong_avg(zs, cfg).average;
    const auto s = expected_coverage(coverage_for_side(60, 60, zs.zone_side()), 16, 20);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 1; q <= s.size(); ++q) {
        num += s[q - 1] * (q <= 5 ? d : (1.0 + static_cast<double>(q)) * d / 5.0);
        den += s[q - 1];
    }
    EXPECT_NEAR(r.l_cnot_avg, num / den, 1e-9 * r.l_cnot_avg);
    double expect = static_cast<double>(r.counts.n_cnot) * (4930.0 + r.l_cnot_avg);
    for (const auto& [k, n] : r.counts.n_one_qubit) expect += static_cast<double>(n) * (cfg.delay(k) + 200.0);
    EXPECT_NEAR(r.latency, expect, 1e-9 * expect);
    EXPECT_NEAR(r.latency, r.counts.path_length, 1e-9 * expect);
}

TEST(Estimate, MonotoneInParameters) {
    const Circuit c = generate_random_circuit(30, 2000, 0.5, 4);
    const FabricConfig base;
    const double d0 = estimate(c, base).latency;

    FabricConfig slower = base;
    slower.speed = base.speed / 2.0;
    EXPECT_GE(estimate(c, slower).latency, d0);

    FabricConfig wider = base;
    wider.channel_capacity = 10;
    EXPECT_LE(estimate(c, wider).latency, d0);

    FabricConfig narrow = base;
    narrow.channel_capacity = 1;
    EXPECT_GE(estimate(c, narrow).latency, d0);

    FabricConfig move = base;
    move.t_move = 300;
    EXPECT_GE(estimate(c, move).latency, d0);

    FabricConfig gates = base;
    gates.delays[GateKind::T] += 1000;
    EXPECT_GE(estimate(c, gates).latency, d0);
}

TEST(Estimate, ClampedZoneWarns) {
    FabricConfig tiny;
    tiny.width = 2;
    tiny.length = 2;
    std::vector<Gate> gates;
    for (Qubit i = 1; i < 10; ++i) gates.push_back(cx(0, i));
    const auto r = estimate(Circuit(10, gates), tiny);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("clamped"), std::string::npos);
}

TEST(Estimate, JsonFields) {
    const auto r = estimate(generate_random_circuit(8, 100, 0.5, 2), FabricConfig{});
    const auto j = to_json(r);
    for (const char* key : {"latency_us", "latency_s", "latency_s_text", "l_cnot_avg_us", "l_g_avg_us",
                            "d_uncong_us", "zone_area", "qubits", "operations", "qodg", "critical", "per_q"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_DOUBLE_EQ(j["latency_s"].get<double>(), r.latency * 1e-6);
    EXPECT_EQ(format_seconds(1.6667), "1.667E+00");
    EXPECT_NE(to_text(r).find("latency D"), std::string::npos);
}
