#pragma once

#include "enas/search_common.hpp"

namespace enas {

struct GaConfig {
    int population = 30;
    double crossover_prob = 0.8;
    double mutation_prob = -1.0;  // < 0 means 1/n, resolved at run time
    int elitism = 1;
    std::uint64_t budget = 6000;
};

// Draws two distinct individuals uniformly, returns the index of the
// lower-J one (first drawn on ties).
int tournament_select(const std::vector<double>& j_values, Rng& rng);

// Each position independently swapped with probability 0.5.
std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b, Rng& rng);

// Each bit flipped independently with probability p.
Genome bit_flip_mutate(const Genome& g, double p, Rng& rng);

SearchResult run_ga(const ObjectiveFn& objective, const EncodingSchema& schema,
                    const GaConfig& config, std::uint64_t seed);

}  // namespace enas
