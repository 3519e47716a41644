#pragma once

#include "adhcn/dense.hpp"
#include "adhcn/hypergraph.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adhcn {

// Disjoint index sets for transductive training.
struct SplitSpec {
    std::vector<Index> train;
    std::vector<Index> val;
    std::vector<Index> test;

    void validate(Index num_nodes) const; // throws SchemaError

    bool operator==(const SplitSpec&) const = default;
};

struct Dataset {
    std::string name;
    Hypergraph hypergraph;
    FeatureMatrix features; // n x d
    LabelVector labels;     // n entries in [0, num_classes)
    std::optional<SplitSpec> splits;

    Index num_nodes() const { return hypergraph.num_nodes; }
    void validate() const; // throws SchemaError

    bool operator==(const Dataset&) const = default;
};

// Planted-partition hypergraph generator: round-robin class assignment,
// hyperedges drawn within one class with probability p_intra, features are
// one-hot class centroids plus Gaussian noise. Deterministic given seed.
struct SynthConfig {
    Index num_nodes = 600;
    Index num_classes = 4;
    Index num_edges = 300;
    Index edge_size = 4;
    double p_intra = 0.9;
    Index feature_dim = 16;
    double noise_sigma = 0.5;
    std::uint64_t seed = 42;

    void validate() const; // throws SchemaError
};

// HGJSON interchange format (see README for the field list).
Dataset load_hgjson(const std::filesystem::path& path);
void save_hgjson(const Dataset& dataset, const std::filesystem::path& path);
std::string to_hgjson_string(const Dataset& dataset);

Dataset gen_planted_partition(const SynthConfig& config);

// Deterministic stratified splits: train_per_class per class, then val_total
// validation nodes from the remainder, rest is test.
SplitSpec make_splits(const LabelVector& labels, Index train_per_class, Index val_total,
                      std::uint64_t seed);

// The conventional default validation size: min(500, n/10).
Index default_val_total(Index num_nodes);

} // namespace adhcn
