#pragma once

#include "adhcn/hypergraph.hpp"
#include "adhcn/sparse.hpp"

#include <utility>
#include <vector>

namespace adhcn {

// Line expansion of a hypergraph: one node per incidence pair (node, edge),
// with two pair nodes adjacent iff they share the hypernode (weight w_node)
// or the hyperedge (weight w_edge). Pairs are ordered by the row-major scan
// of the incidence matrix (ascending node, then ascending edge), which makes
// every derived matrix reproducible byte-for-byte.
struct LEGraph {
    std::vector<std::pair<Index, Index>> pairs; // (node_id, edge_id)
    SparseMatrix adjacency;                     // |V_l| x |V_l|, zero diagonal
    double w_node = 1.0;
    double w_edge = 1.0;

    Index num_pairs() const { return static_cast<Index>(pairs.size()); }
};

// Forward projection P_v (|V_l| x n) copies hypernode rows to their pairs;
// backward projection P'_v (n x |V_l|) averages pair rows back with
// inverse-hyperedge-degree weights, so each non-isolated row sums to 1.
struct ProjectionPair {
    SparseMatrix forward;
    SparseMatrix backward;
};

LEGraph line_expand(const Hypergraph& hg, double w_node = 1.0, double w_edge = 1.0);

// P_v; throws std::invalid_argument when le was not built from hg.
SparseMatrix projection_matrix(const Hypergraph& hg, const LEGraph& le);

// P'_v with P'_v[v,(v,e)] = (1/delta(e)) / sum_{e' contains v} (1/delta(e')).
SparseMatrix back_projection_matrix(const Hypergraph& hg, const LEGraph& le);

ProjectionPair projection_pair(const Hypergraph& hg, const LEGraph& le);

// Symmetric normalization D^{-1/2} (A_l + 2I) D^{-1/2} with D taken from the
// row sums after the two-hop self-loop, so D is always invertible.
SparseMatrix le_norm_operator(const LEGraph& le);

} // namespace adhcn
