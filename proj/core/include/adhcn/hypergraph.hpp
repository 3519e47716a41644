#pragma once

#include "adhcn/sparse.hpp"

#include <vector>

namespace adhcn {

// Hypergraph over nodes 0..num_nodes-1. Hyperedges are sorted ascending with
// no repeated node; per-edge weights default to 1 and must stay positive.
// Size-1 hyperedges are accepted and act as weighted self-loops under the
// normalized convolution operator.
struct Hypergraph {
    Index num_nodes = 0;
    std::vector<std::vector<Index>> hyperedges;
    std::vector<double> edge_weights;

    Index num_edges() const { return static_cast<Index>(hyperedges.size()); }

    // Sorts each hyperedge, fills default unit weights, validates.
    static Hypergraph make(Index num_nodes, std::vector<std::vector<Index>> edges,
                           std::vector<double> weights = {});

    // Throws SchemaError on any invariant violation.
    void validate() const;

    bool operator==(const Hypergraph&) const = default;
};

// Per-node lists of incident hyperedge ids, ascending.
std::vector<std::vector<Index>> node_incidence(const Hypergraph& hg);

// n x m binary incidence matrix H, H[v,e] = 1 iff v belongs to e.
SparseMatrix incidence_matrix(const Hypergraph& hg);

// D_v diagonal: weighted count of incident hyperedges (0 for isolated nodes).
std::vector<double> node_degrees(const Hypergraph& hg);

// D_e diagonal: hyperedge cardinalities.
std::vector<double> edge_degrees(const Hypergraph& hg);

// Normalized hypergraph convolution operator
//     D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}
// as a symmetric n x n matrix. Isolated nodes use the pseudo-inverse
// convention 0^{-1/2} := 0, giving all-zero rows and columns.
SparseMatrix hyper_norm_operator(const Hypergraph& hg);

} // namespace adhcn
