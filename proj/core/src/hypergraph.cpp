#include "adhcn/hypergraph.hpp"

#include "adhcn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adhcn {

Hypergraph Hypergraph::make(Index num_nodes, std::vector<std::vector<Index>> edges,
                            std::vector<double> weights) {
    Hypergraph hg;
    hg.num_nodes = num_nodes;
    hg.hyperedges = std::move(edges);
    for (auto& edge : hg.hyperedges) std::sort(edge.begin(), edge.end());
    if (weights.empty())
        weights.assign(hg.hyperedges.size(), 1.0);
    hg.edge_weights = std::move(weights);
    hg.validate();
    return hg;
}

void Hypergraph::validate() const {
    if (num_nodes < 1) throw SchemaError("hypergraph: num_nodes must be at least 1");
    if (hyperedges.empty()) throw SchemaError("hypergraph: at least one hyperedge required");
    if (edge_weights.size() != hyperedges.size())
        throw SchemaError("hypergraph: edge_weights length " + std::to_string(edge_weights.size()) +
                          " does not match hyperedge count " + std::to_string(hyperedges.size()));
    for (std::size_t e = 0; e < hyperedges.size(); ++e) {
        const auto& edge = hyperedges[e];
        if (edge.empty()) throw SchemaError("hyperedge " + std::to_string(e) + ": empty hyperedge");
        for (std::size_t i = 0; i < edge.size(); ++i) {
            if (edge[i] < 0 || edge[i] >= num_nodes)
                throw SchemaError("hyperedge " + std::to_string(e) + ": node index " +
                                  std::to_string(edge[i]) + " out of range [0," +
                                  std::to_string(num_nodes) + ")");
            if (i > 0 && edge[i - 1] == edge[i])
                throw SchemaError("hyperedge " + std::to_string(e) + ": duplicate node " +
                                  std::to_string(edge[i]));
            if (i > 0 && edge[i - 1] > edge[i])
                throw SchemaError("hyperedge " + std::to_string(e) + ": nodes not sorted ascending");
        }
        if (!(edge_weights[e] > 0.0))
            throw SchemaError("hyperedge " + std::to_string(e) + ": weight must be positive");
    }
}

std::vector<std::vector<Index>> node_incidence(const Hypergraph& hg) {
    std::vector<std::vector<Index>> incident(static_cast<std::size_t>(hg.num_nodes));
    for (Index e = 0; e < hg.num_edges(); ++e)
        for (Index v : hg.hyperedges[static_cast<std::size_t>(e)])
            incident[static_cast<std::size_t>(v)].push_back(e);
    return incident;
}

SparseMatrix incidence_matrix(const Hypergraph& hg) {
    const auto incident = node_incidence(hg);
    std::vector<Triplet> triplets;
    for (Index v = 0; v < hg.num_nodes; ++v)
        for (Index e : incident[static_cast<std::size_t>(v)]) triplets.push_back({v, e, 1.0});
    return SparseMatrix::from_triplets(hg.num_nodes, hg.num_edges(), std::move(triplets));
}

std::vector<double> node_degrees(const Hypergraph& hg) {
    std::vector<double> degrees(static_cast<std::size_t>(hg.num_nodes), 0.0);
    for (Index e = 0; e < hg.num_edges(); ++e) {
        const double w = hg.edge_weights[static_cast<std::size_t>(e)];
        for (Index v : hg.hyperedges[static_cast<std::size_t>(e)])
            degrees[static_cast<std::size_t>(v)] += w;
    }
    return degrees;
}

std::vector<double> edge_degrees(const Hypergraph& hg) {
    std::vector<double> degrees(hg.hyperedges.size());
    for (std::size_t e = 0; e < hg.hyperedges.size(); ++e)
        degrees[e] = static_cast<double>(hg.hyperedges[e].size());
    return degrees;
}

SparseMatrix hyper_norm_operator(const Hypergraph& hg) {
    const auto dv = node_degrees(hg);
    const auto de = edge_degrees(hg);
    std::vector<double> inv_sqrt_dv(dv.size());
    for (std::size_t v = 0; v < dv.size(); ++v)
        inv_sqrt_dv[v] = dv[v] > 0.0 ? 1.0 / std::sqrt(dv[v]) : 0.0;
    // Factor the operator as C C^T with C = D_v^{-1/2} H (W D_e^{-1})^{1/2};
    // the sparse product then comes out bitwise symmetric.
    const auto incident = node_incidence(hg);
    std::vector<Triplet> triplets;
    for (Index v = 0; v < hg.num_nodes; ++v) {
        for (Index e : incident[static_cast<std::size_t>(v)]) {
            const double c = std::sqrt(hg.edge_weights[static_cast<std::size_t>(e)] /
                                       de[static_cast<std::size_t>(e)]);
            triplets.push_back({v, e, inv_sqrt_dv[static_cast<std::size_t>(v)] * c});
        }
    }
    const SparseMatrix c = SparseMatrix::from_triplets(hg.num_nodes, hg.num_edges(), std::move(triplets));
    return c.multiply(c.transpose());
}

} // namespace adhcn
