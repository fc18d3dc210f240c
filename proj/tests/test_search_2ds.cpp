#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enas/search_2ds.hpp"
#include "enas/search_common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace enas;

namespace {

const EncodingSchema kTiny{2, 1, 2};  // n = 4, for hand-checkable bit rules

Genome bits_of(const std::string& s, const EncodingSchema& schema) {
    return Genome::from_string(s, schema);
}

// objective adapter for pure pseudo-boolean functions
ObjectiveFn pseudo_boolean(double (*fn)(const Genome&)) {
    return [fn](const Genome& g) {
        EvaluationRecord rec;
        rec.criterion = fn(g);
        rec.efficacy = rec.criterion;
        return rec;
    };
}

double one_max(const Genome& g) {
    return 1.0 - static_cast<double>(cardinality(g)) / g.size();
}

// planted 3-bit subset {2, 5, 9} on 12 bits; unique optimum at the subset
double planted_subset(const Genome& g) {
    static const std::vector<int> planted = {2, 5, 9};
    double j = 0.0;
    for (int p : planted)
        if (!g.bits[static_cast<std::size_t>(p)]) j += 0.25;
    for (int b = 0; b < g.size(); ++b)
        if (g.bits[static_cast<std::size_t>(b)] &&
            std::find(planted.begin(), planted.end(), b) == planted.end())
            j += 0.03;
    return j;
}

const EncodingSchema kPlantedSchema{8, 1, 4};  // n = 12

}  // namespace

TEST_CASE("learning sets: identical exemplar and position") {
    const auto g = bits_of("1100", kTiny);
    const auto sets = build_learning_sets(g, g);
    CHECK(sets.exemplar.row(1).sum() == 0.0);     // nothing new to learn
    CHECK(sets.exemplar(0, 1) == 1.0);            // one-hot at cardinality 2
    CHECK(sets.self(0, 1) == 1.0);
    CHECK(sets.self.row(1).sum() == 2.0);         // self bits mirror the position
}

TEST_CASE("learning sets: bitwise difference rule") {
    const auto exemplar = bits_of("1100", kTiny);
    const auto position = bits_of("1010", kTiny);
    const auto sets = build_learning_sets(exemplar, position);
    CHECK(sets.exemplar(1, 0) == 0.0);
    CHECK(sets.exemplar(1, 1) == 1.0);  // exemplar-only bit
    CHECK(sets.exemplar(1, 2) == 0.0);
    CHECK(sets.exemplar(1, 3) == 0.0);
    CHECK(sets.self(1, 0) == 1.0);
    CHECK(sets.self(1, 2) == 1.0);
}

TEST_CASE("learning sets: zero-cardinality exemplar leaves the one-hot row empty") {
    const auto sets = build_learning_sets(bits_of("0000", kTiny), bits_of("1010", kTiny));
    CHECK(sets.exemplar.row(0).sum() == 0.0);
}

TEST_CASE("velocity update leaves v unchanged on all-zero learning sets") {
    Rng rng(3);
    Velocity v = Velocity::Zero(2, 4);
    v.setConstant(0.4);
    const LearningMatrix zero = LearningMatrix::Zero(2, 4);
    const Velocity before = v;
    update_velocity(v, zero, zero, zero, zero, 1.0, 0.9, rng);
    CHECK(v == before);
}

TEST_CASE("velocity never decreases under updates") {
    Rng rng(5);
    Velocity v(2, 6);
    for (Eigen::Index j = 0; j < 6; ++j) {
        v(0, j) = rng.u01();
        v(1, j) = rng.u01();
    }
    for (int step = 0; step < 200; ++step) {
        LearningMatrix lp = LearningMatrix::Zero(2, 6), lg = lp, ln = lp, ls = lp;
        for (Eigen::Index j = 0; j < 6; ++j) {
            lp(1, j) = rng.coin();
            lg(1, j) = rng.coin();
            ln(1, j) = rng.coin();
            ls(1, j) = rng.coin();
        }
        const Velocity before = v;
        update_velocity(v, lp, lg, ln, ls, rng.u01(), rng.u01(), rng);
        CHECK(((v - before).array() >= -1e-15).all());
    }
}

TEST_CASE("unification factor gates global vs neighborhood terms") {
    Rng rng(9);
    const LearningMatrix zero = LearningMatrix::Zero(2, 4);
    LearningMatrix only_n = zero, only_g = zero;
    only_n.setConstant(1.0);
    only_g.setConstant(1.0);

    Velocity v = Velocity::Zero(2, 4);
    update_velocity(v, zero, zero, only_n, zero, 0.0, 1.0, rng);  // u_f = 1: no neighborhood
    CHECK(v.sum() == 0.0);

    update_velocity(v, zero, only_g, zero, zero, 0.0, 0.0, rng);  // u_f = 0: no global
    CHECK(v.sum() == 0.0);
}

TEST_CASE("fitness feedback cases") {
    const std::vector<double> swarm_j{1.0, 0.4, 0.7};
    CHECK(fitness_feedback(0.4, 0.5, swarm_j) == doctest::Approx(1.0));  // best and improved
    CHECK(fitness_feedback(0.7, 0.6, swarm_j) == 0.0);                   // worsened
    CHECK(fitness_feedback(1.0, 2.0, swarm_j) == 0.0);                   // improved but worst
    CHECK(fitness_feedback(0.5, 1.0, {0.5, 0.5, 0.5}) == 0.0);           // zero range
}

TEST_CASE("degenerate wheel always returns the loaded index") {
    const EncodingSchema schema{2, 1, 2};
    Velocity v = Velocity::Zero(2, 4);
    v(0, 2) = 3.7;  // all cardinality mass at k = 3
    v.row(1) << 0.1, 0.4, 0.3, 0.2;
    Rng rng(11);
    for (int i = 0; i < 200; ++i) CHECK(roulette_cardinality(v, rng) == 3);
}

TEST_CASE("top-k ranking picks the highest likelihood bits") {
    const EncodingSchema schema{2, 1, 2};
    Velocity v = Velocity::Zero(2, 4);
    v.row(0).setConstant(1.0);
    v.row(1) << 0.9, 0.1, 0.8, 0.2;
    const auto g = top_k_bits(v, 2, schema);
    CHECK(g.to_string() == "1010");
    // ties break by ascending index
    Velocity tie = v;
    tie.row(1) << 0.5, 0.5, 0.5, 0.1;
    CHECK(top_k_bits(tie, 2, schema).to_string() == "1100");
}

TEST_CASE("roulette over [1,1,2] picks the last index about half the time") {
    Velocity v = Velocity::Zero(2, 3);
    v.row(0) << 1.0, 1.0, 2.0;
    v.row(1).setConstant(0.5);
    Rng rng(123);
    int hits = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
        if (roulette_cardinality(v, rng) == 3) ++hits;
    CHECK(std::abs(hits / static_cast<double>(trials) - 0.5) <= 0.03);
}

TEST_CASE("position cardinality equals the roulette draw") {
    const EncodingSchema schema{6, 1, 4};  // n = 10
    Rng vel_rng(7);
    for (int trial = 0; trial < 5000; ++trial) {
        Velocity v(2, schema.genome_bits());
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            v(0, j) = vel_rng.u01();
            v(1, j) = vel_rng.u01();
        }
        Rng draw_a(trial + 1), draw_b(trial + 1);
        const int k = roulette_cardinality(v, draw_a);
        const auto g = update_position(v, schema, draw_b);
        CHECK(cardinality(g) == k);
    }
}

TEST_CASE("run_2ds consumes the budget exactly and never worsens the best") {
    const EncodingSchema schema{8, 1, 4};
    SwarmConfig cfg;
    cfg.swarm_size = 7;
    cfg.budget = 150;  // not a multiple of the swarm: exercises the partial phase
    CountingObjective counting(pseudo_boolean(&one_max));
    const auto res = run_2ds([&](const Genome& g) { return counting(g); }, schema, cfg, 3);
    CHECK(res.evaluations == 150);
    CHECK(counting.count() == 150);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].best_j <= res.trace[i - 1].best_j);
}

TEST_CASE("budget equal to the swarm returns the best of the initial swarm") {
    const EncodingSchema schema{8, 1, 4};
    SwarmConfig cfg;
    cfg.swarm_size = 10;
    cfg.budget = 10;
    const auto res = run_2ds(pseudo_boolean(&one_max), schema, cfg, 9);
    CHECK(res.evaluations == 10);
    CHECK(res.trace.size() == 1);
    CHECK(res.best_j == res.trace[0].best_j);
}

TEST_CASE("2ds solves one-max within 2000 evaluations") {
    const EncodingSchema schema{12, 2, 4};  // n = 20
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SwarmConfig cfg;
        cfg.budget = 2000;
        const auto res = run_2ds(pseudo_boolean(&one_max), schema, cfg, seed);
        if (res.best_j == 0.0) ++solved;
    }
    CHECK(solved >= 9);
}

TEST_CASE("2ds finds the planted subset verified by exhaustive enumeration") {
    // exhaustive oracle over all 4096 genomes
    Genome probe = Genome::zeros(kPlantedSchema);
    double best_j = std::numeric_limits<double>::infinity();
    std::string best_bits;
    for (int mask = 0; mask < (1 << 12); ++mask) {
        for (int b = 0; b < 12; ++b)
            probe.bits[static_cast<std::size_t>(b)] = (mask >> b) & 1;
        const double j = planted_subset(probe);
        if (j < best_j) {
            best_j = j;
            best_bits = probe.to_string();
        }
    }
    CHECK(best_bits == "001001000100");  // bits 2, 5, 9
    CHECK(best_j == 0.0);

    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SwarmConfig cfg;
        cfg.budget = 1500;
        const auto res = run_2ds(pseudo_boolean(&planted_subset), kPlantedSchema, cfg, seed);
        if (res.best.to_string() == best_bits) ++solved;
    }
    CHECK(solved >= 9);
}

TEST_CASE("identical seeds give identical traces") {
    const EncodingSchema schema{8, 1, 4};
    SwarmConfig cfg;
    cfg.budget = 300;
    cfg.swarm_size = 10;
    const auto a = run_2ds(pseudo_boolean(&one_max), schema, cfg, 42);
    const auto b = run_2ds(pseudo_boolean(&one_max), schema, cfg, 42);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].mean_j == b.trace[i].mean_j);
        CHECK(a.trace[i].best_j == b.trace[i].best_j);
    }
    CHECK(a.best == b.best);
}
