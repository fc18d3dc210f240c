#include "enas/encoding.hpp"

#include <algorithm>
#include <stdexcept>

namespace enas {

void EncodingSchema::validate() const {
    if (n_features < 1) throw std::invalid_argument("schema: n_features must be >= 1");
    if (max_layers < 1) throw std::invalid_argument("schema: max_layers must be >= 1");
    if (bits_per_layer < 2) throw std::invalid_argument("schema: bits_per_layer must be >= 2");
}

Genome Genome::zeros(const EncodingSchema& schema) {
    schema.validate();
    Genome g;
    g.schema = schema;
    g.bits.assign(static_cast<std::size_t>(schema.genome_bits()), 0);
    return g;
}

Genome Genome::random(const EncodingSchema& schema, Rng& rng) {
    Genome g = zeros(schema);
    for (auto& b : g.bits) b = rng.coin() ? 1 : 0;
    return g;
}

std::string Genome::to_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

Genome Genome::from_string(const std::string& s, const EncodingSchema& schema) {
    Genome g = zeros(schema);
    if (static_cast<int>(s.size()) != schema.genome_bits())
        throw std::invalid_argument("genome string length does not match schema");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("genome string must contain only 0/1");
        g.bits[i] = s[i] == '1' ? 1 : 0;
    }
    return g;
}

std::uint64_t Genome::hash() const { return fnv1a(bits.data(), bits.size()); }

int cardinality(const Genome& g) {
    int count = 0;
    for (auto b : g.bits) count += b;
    return count;
}

CandidateSolution decode(const Genome& g) {
    const auto& schema = g.schema;
    CandidateSolution sol;
    sol.genome = g;

    std::size_t at = 0;
    for (int layer = 0; layer < schema.max_layers; ++layer) {
        int size = 0;
        for (int p = 0; p < schema.bits_per_layer - 1; ++p)
            size = (size << 1) | g.bits[at + static_cast<std::size_t>(p)];
        const std::uint8_t act_bit = g.bits[at + static_cast<std::size_t>(schema.bits_per_layer) - 1];
        at += static_cast<std::size_t>(schema.bits_per_layer);
        if (size > 0)
            sol.architecture.layers.push_back(
                {size, act_bit ? Activation::Sigmoid : Activation::Tanh});
    }

    for (int j = 0; j < schema.n_features; ++j)
        if (g.bits[at + static_cast<std::size_t>(j)]) sol.feature_subset.push_back(j);

    sol.architecture.input_dim = static_cast<int>(sol.feature_subset.size());
    return sol;
}

Genome encode(const Architecture& arch, const std::vector<int>& feature_subset,
              const EncodingSchema& schema) {
    if (static_cast<int>(arch.layers.size()) > schema.max_layers)
        throw std::invalid_argument("too many layers for schema");
    Genome g = Genome::zeros(schema);

    std::size_t at = 0;
    for (const auto& layer : arch.layers) {
        if (layer.size < 0 || layer.size > schema.max_layer_size())
            throw std::invalid_argument("layer size " + std::to_string(layer.size) +
                                        " exceeds schema maximum " +
                                        std::to_string(schema.max_layer_size()));
        for (int p = 0; p < schema.bits_per_layer - 1; ++p) {
            const int bit_pos = schema.bits_per_layer - 2 - p;
            g.bits[at + static_cast<std::size_t>(p)] =
                static_cast<std::uint8_t>((layer.size >> bit_pos) & 1);
        }
        g.bits[at + static_cast<std::size_t>(schema.bits_per_layer) - 1] =
            layer.activation == Activation::Sigmoid ? 1 : 0;
        at += static_cast<std::size_t>(schema.bits_per_layer);
    }

    const std::size_t feature_base =
        static_cast<std::size_t>(schema.max_layers) * schema.bits_per_layer;
    for (int j : feature_subset) {
        if (j < 0 || j >= schema.n_features)
            throw std::invalid_argument("feature index out of range");
        g.bits[feature_base + static_cast<std::size_t>(j)] = 1;
    }
    return g;
}

}  // namespace enas
