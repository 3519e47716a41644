#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here recomputes results from first principles (dense enumeration, Jacobi
// rotations) so the checks stay independent of the sparse implementation.

#include "adhcn/hypergraph.hpp"
#include "adhcn/rng.hpp"
#include "adhcn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace test_support {

using adhcn::Hypergraph;
using adhcn::Index;
using adhcn::RandomStream;
using adhcn::SparseMatrix;

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const SparseMatrix& m) {
    Dense d(static_cast<std::size_t>(m.rows()),
            std::vector<double>(static_cast<std::size_t>(m.cols()), 0.0));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index k = m.row_offsets()[static_cast<std::size_t>(r)];
             k < m.row_offsets()[static_cast<std::size_t>(r) + 1]; ++k)
            d[static_cast<std::size_t>(r)]
             [static_cast<std::size_t>(m.col_indices()[static_cast<std::size_t>(k)])] =
                 m.values()[static_cast<std::size_t>(k)];
    return d;
}

// Cyclic Jacobi eigensolver for small symmetric matrices. Brute force and
// deliberately independent of the CSR code it is used to check.
inline std::vector<double> symmetric_eigenvalues(Dense a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

inline Hypergraph random_hypergraph(RandomStream& stream, Index max_nodes, Index max_edges,
                                    Index max_edge_size) {
    const Index n = 1 + static_cast<Index>(stream.uniform_int(static_cast<std::uint64_t>(max_nodes)));
    const Index m = 1 + static_cast<Index>(stream.uniform_int(static_cast<std::uint64_t>(max_edges)));
    std::vector<Index> nodes(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i;
    std::vector<std::vector<Index>> edges;
    for (Index e = 0; e < m; ++e) {
        const Index cap = std::min<Index>(max_edge_size, n);
        const std::size_t size =
            1 + static_cast<std::size_t>(stream.uniform_int(static_cast<std::uint64_t>(cap)));
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(nodes.size() - i));
            std::swap(nodes[i], nodes[j]);
        }
        std::vector<Index> edge(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(edge.begin(), edge.end());
        edges.push_back(std::move(edge));
    }
    return Hypergraph::make(n, std::move(edges));
}

struct BruteForceLE {
    std::vector<std::pair<Index, Index>> pairs;
    Dense adjacency;
    bool shared_both = false; // should stay false: distinct pairs cannot share node and edge
};

// O(P^2) oracle: enumerate pairs by the row-major incidence scan and test
// every pair of pairs for a shared node or shared edge.
inline BruteForceLE brute_force_line_expand(const Hypergraph& hg, double w_node = 1.0,
                                            double w_edge = 1.0) {
    BruteForceLE out;
    for (Index v = 0; v < hg.num_nodes; ++v)
        for (Index e = 0; e < hg.num_edges(); ++e) {
            const auto& edge = hg.hyperedges[static_cast<std::size_t>(e)];
            if (std::binary_search(edge.begin(), edge.end(), v)) out.pairs.emplace_back(v, e);
        }
    const std::size_t p = out.pairs.size();
    out.adjacency.assign(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const bool same_node = out.pairs[i].first == out.pairs[j].first;
            const bool same_edge = out.pairs[i].second == out.pairs[j].second;
            if (same_node && same_edge) out.shared_both = true;
            double w = 0.0;
            if (same_node) w = w_node;
            if (same_edge) w = w_edge;
            out.adjacency[i][j] = out.adjacency[j][i] = w;
        }
    }
    return out;
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace test_support
