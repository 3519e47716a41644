#include "adhcn/errors.hpp"
#include "adhcn/hypergraph.hpp"
#include "adhcn/rng.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace adhcn;

namespace {

// the small worked example used throughout: V={0,1,2}, E={{0,1},{1,2}}
Hypergraph h3() { return Hypergraph::make(3, {{0, 1}, {1, 2}}); }

} // namespace

TEST_CASE("incidence matrix") {
    const SparseMatrix h = incidence_matrix(h3());
    CHECK(test_support::to_dense(h) == test_support::Dense{{1, 0}, {1, 1}, {0, 1}});

    const SparseMatrix full = incidence_matrix(Hypergraph::make(4, {{0, 1, 2, 3}}));
    CHECK(test_support::to_dense(full) == test_support::Dense{{1}, {1}, {1}, {1}});

    const SparseMatrix single = incidence_matrix(Hypergraph::make(1, {{0}}));
    CHECK(test_support::to_dense(single) == test_support::Dense{{1}});
}

TEST_CASE("node degrees") {
    CHECK(node_degrees(h3()) == std::vector<double>{1, 2, 1});
    CHECK(node_degrees(Hypergraph::make(3, {{0, 1, 2}})) == std::vector<double>{1, 1, 1});
    CHECK(node_degrees(Hypergraph::make(2, {{0, 1}}, {2.0})) == std::vector<double>{2.0, 2.0});
}

TEST_CASE("edge degrees") {
    CHECK(edge_degrees(h3()) == std::vector<double>{2, 2});
    CHECK(edge_degrees(Hypergraph::make(4, {{0, 1, 2, 3}})) == std::vector<double>{4});
    CHECK(edge_degrees(Hypergraph::make(1, {{0}})) == std::vector<double>{1});
}

TEST_CASE("normalized operator on the worked example") {
    const auto op = test_support::to_dense(hyper_norm_operator(h3()));
    const test_support::Dense want{{0.5, 0.35355, 0.0}, {0.35355, 0.5, 0.35355}, {0.0, 0.35355, 0.5}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(op[i][j] == doctest::Approx(want[i][j]).epsilon(1e-5));
}

TEST_CASE("normalized operator edge cases") {
    CHECK(test_support::to_dense(hyper_norm_operator(Hypergraph::make(1, {{0}}))) ==
          test_support::Dense{{1.0}});

    // appending an isolated node appends a zero row and column
    const SparseMatrix op = hyper_norm_operator(Hypergraph::make(4, {{0, 1}, {1, 2}}));
    for (Index i = 0; i < 4; ++i) {
        CHECK(op.at(3, i) == 0.0);
        CHECK(op.at(i, 3) == 0.0);
    }
}

TEST_CASE("operator is bitwise symmetric") {
    RandomStream stream(21, 0);
    for (int i = 0; i < 30; ++i) {
        const Hypergraph hg = test_support::random_hypergraph(stream, 15, 8, 5);
        const SparseMatrix op = hyper_norm_operator(hg);
        CHECK(op == op.transpose());
    }
}

TEST_CASE("operator eigenvalues stay in [-1, 1]") {
    RandomStream stream(22, 0);
    int checked = 0;
    while (checked < 25) {
        const Hypergraph hg = test_support::random_hypergraph(stream, 10, 6, 4);
        const auto degrees = node_degrees(hg);
        bool isolated = false;
        for (double d : degrees) isolated |= d == 0.0;
        if (isolated) continue; // the bound is claimed for fully covered node sets
        ++checked;
        const auto eig = test_support::symmetric_eigenvalues(
            test_support::to_dense(hyper_norm_operator(hg)));
        for (double lambda : eig) {
            CHECK(lambda >= -1.0 - 1e-8);
            CHECK(lambda <= 1.0 + 1e-8);
        }
    }
}

TEST_CASE("incidence row and column sums match the degree vectors") {
    RandomStream stream(23, 0);
    for (int i = 0; i < 20; ++i) {
        const Hypergraph hg = test_support::random_hypergraph(stream, 12, 6, 5);
        const auto h = test_support::to_dense(incidence_matrix(hg));
        const auto dv = node_degrees(hg);
        const auto de = edge_degrees(hg);
        for (Index v = 0; v < hg.num_nodes; ++v) {
            double row = 0.0;
            for (double x : h[static_cast<std::size_t>(v)]) row += x;
            CHECK(row == dv[static_cast<std::size_t>(v)]);
        }
        for (Index e = 0; e < hg.num_edges(); ++e) {
            double col = 0.0;
            for (Index v = 0; v < hg.num_nodes; ++v) col += h[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)];
            CHECK(col == de[static_cast<std::size_t>(e)]);
        }
    }
}

TEST_CASE("operator is equivariant under node relabeling") {
    RandomStream stream(24, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const Hypergraph hg = test_support::random_hypergraph(stream, 10, 5, 4);
        // random permutation of node ids
        std::vector<Index> perm(static_cast<std::size_t>(hg.num_nodes));
        for (Index i = 0; i < hg.num_nodes; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(perm.size() - i));
            std::swap(perm[i], perm[j]);
        }
        std::vector<std::vector<Index>> relabeled;
        for (const auto& edge : hg.hyperedges) {
            std::vector<Index> mapped;
            for (Index v : edge) mapped.push_back(perm[static_cast<std::size_t>(v)]);
            relabeled.push_back(std::move(mapped));
        }
        const Hypergraph hg2 = Hypergraph::make(hg.num_nodes, std::move(relabeled), hg.edge_weights);
        const SparseMatrix op1 = hyper_norm_operator(hg);
        const SparseMatrix op2 = hyper_norm_operator(hg2);
        for (Index i = 0; i < hg.num_nodes; ++i)
            for (Index j = 0; j < hg.num_nodes; ++j)
                CHECK(op1.at(i, j) ==
                      op2.at(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("hypergraph validation rejects malformed inputs") {
    CHECK_THROWS_AS(Hypergraph::make(3, {}), SchemaError);
    CHECK_THROWS_AS(Hypergraph::make(3, {{}}), SchemaError);
    CHECK_THROWS_WITH_AS(Hypergraph::make(3, {{0, 0, 1}}), doctest::Contains("duplicate node"),
                         SchemaError);
    CHECK_THROWS_WITH_AS(Hypergraph::make(3, {{0, 7}}), doctest::Contains("out of range"),
                         SchemaError);
    CHECK_THROWS_AS(Hypergraph::make(3, {{0, 1}}, {0.0}), SchemaError);
    CHECK_THROWS_AS(Hypergraph::make(3, {{0, 1}}, {1.0, 1.0}), SchemaError);
    // unsorted input is normalized rather than rejected
    CHECK(Hypergraph::make(3, {{2, 0}}).hyperedges == std::vector<std::vector<Index>>{{0, 2}});
}
