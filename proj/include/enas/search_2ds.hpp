#pragma once

#include "enas/search_common.hpp"

#include <Eigen/Dense>

namespace enas {

struct SwarmConfig {
    int swarm_size = 30;        // ps
    double unification = 0.9;   // u_f: global vs neighborhood weight
    int refresh_gap = 30;       // RG: stagnation limit before velocity reset
    std::uint64_t budget = 6000;  // total criterion evaluations, exact
};

// 2x n velocity: row 0 holds cardinality likelihoods, row 1 bit likelihoods.
using Velocity = Eigen::Matrix<double, 2, Eigen::Dynamic>;

// 2x n binary learning matrix: row 0 one-hot at the source cardinality,
// row 1 the bit learning vector.
using LearningMatrix = Eigen::Matrix<double, 2, Eigen::Dynamic>;

// Learning sets for an exemplar and for the particle itself. The exemplar
// bit row keeps only bits set in the exemplar but absent from the position;
// the self bit row is the position itself. A cardinality of zero leaves the
// one-hot row empty.
struct LearningSets {
    LearningMatrix exemplar;
    LearningMatrix self;
};

LearningSets build_learning_sets(const Genome& exemplar, const Genome& position);

// V <- V + r1.*L_P + u_f*r2.*L_G + (1-u_f)*r3.*L_N + delta*L_self,
// r1, r2, r3 elementwise uniform in [0, 2].
void update_velocity(Velocity& v, const LearningMatrix& learn_pbest,
                     const LearningMatrix& learn_gbest, const LearningMatrix& learn_nbest,
                     const LearningMatrix& learn_self, double delta, double unification,
                     Rng& rng);

// Roulette wheel over the cardinality row: smallest k with r < p_k where
// p_k is the normalized cumulative likelihood and r is uniform in [0, 1).
int roulette_cardinality(const Velocity& v, Rng& rng);

// Sets exactly the k highest-likelihood bits of the bit row, ties resolved
// by ascending index.
Genome top_k_bits(const Velocity& v, int k, const EncodingSchema& schema);

// Roulette wheel on the cardinality row picks k; the k highest-likelihood
// bits form the new position.
Genome update_position(const Velocity& v, const EncodingSchema& schema, Rng& rng);

// Fitness feedback of Eq-style (max - J_i) / (max - min), zero when the
// particle did not improve or when the swarm range is zero.
double fitness_feedback(double j_current, double j_previous,
                        const std::vector<double>& swarm_j);

SearchResult run_2ds(const ObjectiveFn& objective, const EncodingSchema& schema,
                     const SwarmConfig& config, std::uint64_t seed);

}  // namespace enas
