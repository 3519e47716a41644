#include "adhcn/line_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adhcn {

namespace {

// pair index lookup table: offsets[v] + position of e in incident[v]
struct PairIndexer {
    std::vector<std::vector<Index>> incident;
    std::vector<Index> offsets;

    explicit PairIndexer(const Hypergraph& hg) : incident(node_incidence(hg)) {
        offsets.resize(incident.size() + 1, 0);
        for (std::size_t v = 0; v < incident.size(); ++v)
            offsets[v + 1] = offsets[v] + static_cast<Index>(incident[v].size());
    }

    Index operator()(Index v, Index e) const {
        const auto& edges = incident[static_cast<std::size_t>(v)];
        const auto it = std::lower_bound(edges.begin(), edges.end(), e);
        return offsets[static_cast<std::size_t>(v)] + static_cast<Index>(it - edges.begin());
    }
};

void check_built_from(const Hypergraph& hg, const LEGraph& le) {
    std::vector<std::pair<Index, Index>> expected;
    const auto incident = node_incidence(hg);
    for (Index v = 0; v < hg.num_nodes; ++v)
        for (Index e : incident[static_cast<std::size_t>(v)]) expected.emplace_back(v, e);
    if (expected != le.pairs)
        throw std::invalid_argument("projection: LEGraph was not built from this hypergraph");
}

} // namespace

LEGraph line_expand(const Hypergraph& hg, double w_node, double w_edge) {
    hg.validate();
    LEGraph le;
    le.w_node = w_node;
    le.w_edge = w_edge;
    const PairIndexer pidx(hg);
    for (Index v = 0; v < hg.num_nodes; ++v)
        for (Index e : pidx.incident[static_cast<std::size_t>(v)]) le.pairs.emplace_back(v, e);

    // Two distinct pairs can never share both the node and the edge, so the
    // two cases below are disjoint.
    std::vector<Triplet> triplets;
    for (Index e = 0; e < hg.num_edges(); ++e) {
        const auto& members = hg.hyperedges[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const Index p = pidx(members[i], e);
                const Index q = pidx(members[j], e);
                triplets.push_back({p, q, w_edge});
                triplets.push_back({q, p, w_edge});
            }
        }
    }
    for (Index v = 0; v < hg.num_nodes; ++v) {
        const auto& edges = pidx.incident[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                const Index p = pidx(v, edges[i]);
                const Index q = pidx(v, edges[j]);
                triplets.push_back({p, q, w_node});
                triplets.push_back({q, p, w_node});
            }
        }
    }
    le.adjacency = SparseMatrix::from_triplets(le.num_pairs(), le.num_pairs(), std::move(triplets));
    return le;
}

SparseMatrix projection_matrix(const Hypergraph& hg, const LEGraph& le) {
    check_built_from(hg, le);
    std::vector<Triplet> triplets;
    triplets.reserve(le.pairs.size());
    for (Index p = 0; p < le.num_pairs(); ++p)
        triplets.push_back({p, le.pairs[static_cast<std::size_t>(p)].first, 1.0});
    return SparseMatrix::from_triplets(le.num_pairs(), hg.num_nodes, std::move(triplets));
}

SparseMatrix back_projection_matrix(const Hypergraph& hg, const LEGraph& le) {
    check_built_from(hg, le);
    const auto de = edge_degrees(hg);
    // normalizer per node: sum of inverse hyperedge degrees over incidences
    std::vector<double> inv_degree_sum(static_cast<std::size_t>(hg.num_nodes), 0.0);
    for (const auto& [v, e] : le.pairs)
        inv_degree_sum[static_cast<std::size_t>(v)] += 1.0 / de[static_cast<std::size_t>(e)];
    std::vector<Triplet> triplets;
    triplets.reserve(le.pairs.size());
    for (Index p = 0; p < le.num_pairs(); ++p) {
        const auto& [v, e] = le.pairs[static_cast<std::size_t>(p)];
        const double w = (1.0 / de[static_cast<std::size_t>(e)]) /
                         inv_degree_sum[static_cast<std::size_t>(v)];
        triplets.push_back({v, p, w});
    }
    return SparseMatrix::from_triplets(hg.num_nodes, le.num_pairs(), std::move(triplets));
}

ProjectionPair projection_pair(const Hypergraph& hg, const LEGraph& le) {
    return {projection_matrix(hg, le), back_projection_matrix(hg, le)};
}

SparseMatrix le_norm_operator(const LEGraph& le) {
    const SparseMatrix with_loops = le.adjacency.plus_scaled_identity(2.0);
    auto degrees = with_loops.row_sums();
    for (double& d : degrees) d = 1.0 / std::sqrt(d); // every degree >= 2
    return with_loops.scale_symmetric(degrees);
}

} // namespace adhcn
