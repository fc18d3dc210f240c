#pragma once

#include "enas/mlp.hpp"
#include "enas/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace enas {

struct EncodingSchema {
    int n_features = 0;   // n_f
    int max_layers = 2;   // n_l
    int bits_per_layer = 8;

    int genome_bits() const { return n_features + max_layers * bits_per_layer; }
    int max_layer_size() const { return (1 << (bits_per_layer - 1)) - 1; }

    void validate() const;
    friend bool operator==(const EncodingSchema&, const EncodingSchema&) = default;
};

// n-bit position: architecture block first (max_layers x bits_per_layer),
// feature block second (n_features bits).
struct Genome {
    std::vector<std::uint8_t> bits;
    EncodingSchema schema;

    static Genome zeros(const EncodingSchema& schema);
    static Genome random(const EncodingSchema& schema, Rng& rng);

    int size() const { return static_cast<int>(bits.size()); }
    std::string to_string() const;
    static Genome from_string(const std::string& s, const EncodingSchema& schema);

    std::uint64_t hash() const;
    friend bool operator==(const Genome&, const Genome&) = default;
};

struct CandidateSolution {
    Architecture architecture;         // input_dim = selected feature count
    std::vector<int> feature_subset;   // ascending indices into [0, n_f)
    Genome genome;
};

int cardinality(const Genome& g);

// Total over all bitstrings: zero-size layers are skipped, later non-zero
// layers stack in order. Per-layer block: size from the leading
// bits_per_layer-1 bits (most significant first), activation from the last
// bit (1 = sigmoid, 0 = tanh).
CandidateSolution decode(const Genome& g);

// Inverse on canonical forms; throws on size overflow or too many layers.
Genome encode(const Architecture& arch, const std::vector<int>& feature_subset,
              const EncodingSchema& schema);

}  // namespace enas
