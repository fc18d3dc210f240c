#include "enas/search_ga.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace enas {

int tournament_select(const std::vector<double>& j_values, Rng& rng) {
    const auto n = j_values.size();
    if (n < 2) throw std::invalid_argument("tournament needs a population of at least 2");
    const auto a = static_cast<std::size_t>(rng.below(n));
    auto b = static_cast<std::size_t>(rng.below(n - 1));
    if (b >= a) ++b;  // second draw distinct from the first
    return j_values[b] < j_values[a] ? static_cast<int>(b) : static_cast<int>(a);
}

std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b, Rng& rng) {
    if (!(a.schema == b.schema))
        throw std::invalid_argument("crossover requires a shared schema");
    Genome c1 = a, c2 = b;
    for (std::size_t j = 0; j < c1.bits.size(); ++j)
        if (rng.coin()) std::swap(c1.bits[j], c2.bits[j]);
    return {std::move(c1), std::move(c2)};
}

Genome bit_flip_mutate(const Genome& g, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("mutation probability outside [0, 1]");
    Genome out = g;
    for (auto& bit : out.bits)
        if (rng.u01() < p) bit ^= 1;
    return out;
}

SearchResult run_ga(const ObjectiveFn& objective, const EncodingSchema& schema,
                    const GaConfig& config, std::uint64_t seed) {
    schema.validate();
    const int pop_size = config.population;
    if (pop_size < 2) throw std::invalid_argument("GA population must be >= 2");
    if (config.elitism < 0 || config.elitism >= pop_size)
        throw std::invalid_argument("elitism must be in [0, population)");
    if (config.budget < static_cast<std::uint64_t>(pop_size))
        throw std::invalid_argument("budget must cover the initial population");

    const double mutation =
        config.mutation_prob < 0.0 ? 1.0 / schema.genome_bits() : config.mutation_prob;

    Rng rng(mix_seed({seed, 0x4741ULL}));  // "GA"
    std::vector<Genome> population;
    population.reserve(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) population.push_back(Genome::random(schema, rng));

    std::vector<EvaluationRecord> records(population.size());
    std::vector<double> j_values(population.size());

    SearchResult result;
    auto evaluate_all = [&](const std::vector<Genome>& genomes,
                            std::vector<EvaluationRecord>& out_records,
                            std::vector<double>& out_j) {
        out_records.resize(genomes.size());
        out_j.resize(genomes.size());
        parallel_for(genomes.size(), [&](std::size_t i) {
            out_records[i] = objective(genomes[i]);
            out_j[i] = out_records[i].criterion;
        });
        result.evaluations += genomes.size();
    };

    evaluate_all(population, records, j_values);

    auto best_index = [&] {
        std::size_t best = 0;
        for (std::size_t i = 1; i < j_values.size(); ++i)
            if (j_values[i] < j_values[best]) best = i;
        return best;
    };

    std::size_t best = best_index();
    result.best = population[best];
    result.best_j = j_values[best];
    result.best_record = records[best];

    int generation = 0;
    result.trace.push_back(summarize_iteration(generation, records, result.best_j));

    std::uint64_t remaining = config.budget - static_cast<std::uint64_t>(pop_size);
    while (remaining > 0) {
        ++generation;
        const auto children_wanted = static_cast<std::size_t>(std::min<std::uint64_t>(
            remaining, static_cast<std::uint64_t>(pop_size - config.elitism)));

        std::vector<Genome> children;
        children.reserve(children_wanted);
        while (children.size() < children_wanted) {
            const int pa = tournament_select(j_values, rng);
            const int pb = tournament_select(j_values, rng);
            Genome c1 = population[static_cast<std::size_t>(pa)];
            Genome c2 = population[static_cast<std::size_t>(pb)];
            if (rng.u01() < config.crossover_prob)
                std::tie(c1, c2) = uniform_crossover(c1, c2, rng);
            children.push_back(bit_flip_mutate(c1, mutation, rng));
            if (children.size() < children_wanted)
                children.push_back(bit_flip_mutate(c2, mutation, rng));
        }

        std::vector<EvaluationRecord> child_records;
        std::vector<double> child_j;
        evaluate_all(children, child_records, child_j);
        remaining -= children.size();

        // elites (by ascending J) carry over with their records
        std::vector<std::size_t> order(population.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return j_values[a] < j_values[b]; });

        std::vector<Genome> next;
        std::vector<EvaluationRecord> next_records;
        std::vector<double> next_j;
        for (int e = 0; e < config.elitism; ++e) {
            next.push_back(population[order[static_cast<std::size_t>(e)]]);
            next_records.push_back(records[order[static_cast<std::size_t>(e)]]);
            next_j.push_back(j_values[order[static_cast<std::size_t>(e)]]);
        }
        for (std::size_t i = 0; i < children.size(); ++i) {
            next.push_back(std::move(children[i]));
            next_records.push_back(std::move(child_records[i]));
            next_j.push_back(child_j[i]);
        }
        // constant population except in the budget-exhausting final generation
        if (remaining > 0 && next.size() != static_cast<std::size_t>(pop_size))
            throw std::logic_error("GA population size drifted");
        population = std::move(next);
        records = std::move(next_records);
        j_values = std::move(next_j);

        best = best_index();
        if (j_values[best] < result.best_j) {
            result.best = population[best];
            result.best_j = j_values[best];
            result.best_record = records[best];
        }
        result.trace.push_back(summarize_iteration(generation, records, result.best_j));
    }
    return result;
}

}  // namespace enas
