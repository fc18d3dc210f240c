#include "enas/search_2ds.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace enas {

namespace {

void one_hot_cardinality(LearningMatrix& m, int card) {
    if (card >= 1 && card <= m.cols()) m(0, card - 1) = 1.0;
}

Velocity random_velocity(int n, Rng& rng) {
    Velocity v(2, n);
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        v(0, j) = rng.u01();
        v(1, j) = rng.u01();
    }
    return v;
}

}  // namespace

LearningSets build_learning_sets(const Genome& exemplar, const Genome& position) {
    if (!(exemplar.schema == position.schema))
        throw std::invalid_argument("learning sets require a shared schema");
    const int n = exemplar.size();
    LearningSets sets;
    sets.exemplar = LearningMatrix::Zero(2, n);
    sets.self = LearningMatrix::Zero(2, n);

    one_hot_cardinality(sets.exemplar, cardinality(exemplar));
    one_hot_cardinality(sets.self, cardinality(position));

    for (int j = 0; j < n; ++j) {
        const bool in_exemplar = exemplar.bits[static_cast<std::size_t>(j)] != 0;
        const bool in_position = position.bits[static_cast<std::size_t>(j)] != 0;
        if (in_exemplar && !in_position) sets.exemplar(1, j) = 1.0;
        if (in_position) sets.self(1, j) = 1.0;
    }
    return sets;
}

void update_velocity(Velocity& v, const LearningMatrix& learn_pbest,
                     const LearningMatrix& learn_gbest, const LearningMatrix& learn_nbest,
                     const LearningMatrix& learn_self, double delta, double unification,
                     Rng& rng) {
    const Eigen::Index n = v.cols();
    for (Eigen::Index row = 0; row < 2; ++row) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double r1 = rng.uniform(0.0, 2.0);
            const double r2 = rng.uniform(0.0, 2.0);
            const double r3 = rng.uniform(0.0, 2.0);
            v(row, j) += r1 * learn_pbest(row, j) + unification * r2 * learn_gbest(row, j) +
                         (1.0 - unification) * r3 * learn_nbest(row, j) +
                         delta * learn_self(row, j);
        }
    }
}

int roulette_cardinality(const Velocity& v, Rng& rng) {
    const Eigen::Index n = v.cols();
    const double total = v.row(0).sum();
    if (!(total > 0.0)) throw std::invalid_argument("cardinality likelihoods sum to zero");

    const double r = rng.u01() * total;
    double cum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cum += v(0, j);
        if (r < cum) return static_cast<int>(j) + 1;
    }
    return static_cast<int>(n);
}

Genome top_k_bits(const Velocity& v, int k, const EncodingSchema& schema) {
    const Eigen::Index n = v.cols();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v(1, a) > v(1, b); });

    Genome g = Genome::zeros(schema);
    for (int i = 0; i < k; ++i)
        g.bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    return g;
}

Genome update_position(const Velocity& v, const EncodingSchema& schema, Rng& rng) {
    return top_k_bits(v, roulette_cardinality(v, rng), schema);
}

double fitness_feedback(double j_current, double j_previous,
                        const std::vector<double>& swarm_j) {
    if (!(j_current < j_previous)) return 0.0;
    const auto [lo, hi] = std::minmax_element(swarm_j.begin(), swarm_j.end());
    const double range = *hi - *lo;
    if (range <= 0.0) return 0.0;
    return (*hi - j_current) / range;
}

SearchResult run_2ds(const ObjectiveFn& objective, const EncodingSchema& schema,
                     const SwarmConfig& config, std::uint64_t seed) {
    schema.validate();
    const int ps = config.swarm_size;
    if (ps < 3) throw std::invalid_argument("2DS needs a swarm of at least 3 (ring topology)");
    if (config.budget < static_cast<std::uint64_t>(ps))
        throw std::invalid_argument("budget must cover the initial swarm");
    const int n = schema.genome_bits();

    struct Particle {
        Genome position;
        Velocity velocity;
        Genome pbest;
        double pbestval = std::numeric_limits<double>::infinity();
        double prev_pbestval = std::numeric_limits<double>::infinity();
        double j_current = std::numeric_limits<double>::infinity();
        double j_previous = std::numeric_limits<double>::infinity();
        int stagnation = 0;
        Rng rng{0};
        EvaluationRecord record;
        EvaluationRecord pbest_record;
    };

    std::vector<Particle> swarm(static_cast<std::size_t>(ps));
    for (int i = 0; i < ps; ++i) {
        auto& p = swarm[static_cast<std::size_t>(i)];
        p.rng = Rng(mix_seed({seed, 0x32445350ULL, static_cast<std::uint64_t>(i)}));  // "2DSP"
        p.position = Genome::random(schema, p.rng);
        p.velocity = random_velocity(n, p.rng);
    }

    SearchResult result;
    auto evaluate_range = [&](std::size_t count) {
        parallel_for(count, [&](std::size_t i) {
            auto& p = swarm[i];
            p.record = objective(p.position);
            p.j_previous = p.j_current;
            p.j_current = p.record.criterion;
        });
        result.evaluations += count;
    };

    evaluate_range(static_cast<std::size_t>(ps));
    for (auto& p : swarm) {
        p.pbest = p.position;
        p.pbestval = p.j_current;
        p.pbest_record = p.record;
        p.prev_pbestval = p.pbestval;
        p.j_previous = p.j_current;  // no earlier iteration: feedback term idles
    }

    auto global_best_index = [&] {
        int best = 0;
        for (int i = 1; i < ps; ++i)
            if (swarm[static_cast<std::size_t>(i)].pbestval <
                swarm[static_cast<std::size_t>(best)].pbestval)
                best = i;
        return best;
    };
    auto neighborhood_best_index = [&](int i) {
        int best = i;
        for (int d : {-1, 1}) {
            const int j = ((i + d) % ps + ps) % ps;
            if (swarm[static_cast<std::size_t>(j)].pbestval <
                swarm[static_cast<std::size_t>(best)].pbestval)
                best = j;
        }
        return best;
    };

    int gbest = global_best_index();
    auto record_trace = [&](int iteration) {
        std::vector<EvaluationRecord> records;
        records.reserve(static_cast<std::size_t>(ps));
        for (const auto& p : swarm) records.push_back(p.record);
        result.trace.push_back(summarize_iteration(
            iteration, records, swarm[static_cast<std::size_t>(gbest)].pbestval));
    };
    record_trace(0);

    std::vector<double> swarm_j(static_cast<std::size_t>(ps));
    std::uint64_t remaining = config.budget - static_cast<std::uint64_t>(ps);
    int iteration = 0;
    while (remaining > 0) {
        ++iteration;
        const auto updated =
            static_cast<std::size_t>(std::min<std::uint64_t>(remaining, static_cast<std::uint64_t>(ps)));

        for (int i = 0; i < ps; ++i) swarm_j[static_cast<std::size_t>(i)] =
            swarm[static_cast<std::size_t>(i)].j_current;

        for (std::size_t i = 0; i < updated; ++i) {
            auto& p = swarm[i];
            if (p.stagnation >= config.refresh_gap) {
                p.velocity = random_velocity(n, p.rng);
                p.stagnation = 0;
            }
            const auto from_pbest = build_learning_sets(p.pbest, p.position);
            const auto from_gbest =
                build_learning_sets(swarm[static_cast<std::size_t>(gbest)].pbest, p.position);
            const auto from_nbest = build_learning_sets(
                swarm[static_cast<std::size_t>(neighborhood_best_index(static_cast<int>(i)))].pbest,
                p.position);
            const double delta = fitness_feedback(p.j_current, p.j_previous, swarm_j);
            update_velocity(p.velocity, from_pbest.exemplar, from_gbest.exemplar,
                            from_nbest.exemplar, from_pbest.self, delta, config.unification,
                            p.rng);
            p.position = update_position(p.velocity, schema, p.rng);
        }

        evaluate_range(updated);
        remaining -= updated;

        for (std::size_t i = 0; i < updated; ++i) {
            auto& p = swarm[i];
            p.prev_pbestval = p.pbestval;
            if (p.j_current < p.pbestval) {
                p.pbestval = p.j_current;
                p.pbest = p.position;
                p.pbest_record = p.record;
            }
            if (p.pbestval >= p.prev_pbestval) ++p.stagnation;
        }
        gbest = global_best_index();
        record_trace(iteration);
    }

    const auto& champion = swarm[static_cast<std::size_t>(gbest)];
    result.best = champion.pbest;
    result.best_j = champion.pbestval;
    result.best_record = champion.pbest_record;
    return result;
}

}  // namespace enas
