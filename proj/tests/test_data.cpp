#include "adhcn/dataset.hpp"
#include "adhcn/errors.hpp"
#include "adhcn/rng.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace adhcn;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "adhcn_data_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
    const fs::path path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

const char* kMinimalH3 = R"({
  "name": "h3",
  "num_hypernodes": 3,
  "hyperedges": [[0, 1], [1, 2]],
  "features": [[1.0], [2.0], [3.0]],
  "labels": [0, 0, 1],
  "num_classes": 2
})";

Dataset random_dataset(RandomStream& stream) {
    Dataset ds;
    ds.name = "random-" + std::to_string(stream.next_u64() % 1000);
    ds.hypergraph = test_support::random_hypergraph(stream, 50, 12, 5);
    const Index d = 1 + static_cast<Index>(stream.uniform_int(4));
    ds.features = Matrix(ds.hypergraph.num_nodes, d);
    for (double& v : ds.features.data()) v = stream.uniform(-10.0, 10.0);
    ds.labels.num_classes = 2 + static_cast<int>(stream.uniform_int(3));
    for (Index i = 0; i < ds.hypergraph.num_nodes; ++i)
        ds.labels.values.push_back(
            i < ds.labels.num_classes
                ? static_cast<int>(i) // guarantee every class appears
                : static_cast<int>(stream.uniform_int(ds.labels.num_classes)));
    return ds;
}

} // namespace

TEST_CASE("minimal document loads into the worked example") {
    const Dataset ds = load_hgjson(write_text("h3.json", kMinimalH3));
    CHECK(ds.name == "h3");
    CHECK(ds.hypergraph.num_nodes == 3);
    CHECK(ds.hypergraph.hyperedges == std::vector<std::vector<Index>>{{0, 1}, {1, 2}});
    CHECK(ds.hypergraph.edge_weights == std::vector<double>{1.0, 1.0});
    CHECK(ds.features == Matrix{{1.0}, {2.0}, {3.0}});
    CHECK(ds.labels.values == std::vector<int>{0, 0, 1});
    CHECK(ds.labels.num_classes == 2);
    CHECK_FALSE(ds.splits.has_value());

    // round trip through save
    const fs::path out = temp_dir() / "h3_rt.json";
    save_hgjson(ds, out);
    CHECK(load_hgjson(out) == ds);
}

TEST_CASE("schema violations name the offending field") {
    CHECK_THROWS_WITH_AS(load_hgjson(write_text("missing_labels.json", R"({
        "name": "x", "num_hypernodes": 1, "hyperedges": [[0]],
        "features": [[1.0]], "num_classes": 2})")),
                         doctest::Contains("labels"), SchemaError);

    CHECK_THROWS_WITH_AS(load_hgjson(write_text("dup_node.json", R"({
        "name": "x", "num_hypernodes": 2, "hyperedges": [[0, 0, 1]],
        "features": [[1.0], [1.0]], "labels": [0, 1], "num_classes": 2})")),
                         doctest::Contains("duplicate node"), SchemaError);

    CHECK_THROWS_WITH_AS(load_hgjson(write_text("bad_index.json", R"({
        "name": "x", "num_hypernodes": 2, "hyperedges": [[0, 5]],
        "features": [[1.0], [1.0]], "labels": [0, 1], "num_classes": 2})")),
                         doctest::Contains("out of range"), SchemaError);

    CHECK_THROWS_WITH_AS(load_hgjson(write_text("ragged.json", R"({
        "name": "x", "num_hypernodes": 2, "hyperedges": [[0, 1]],
        "features": [[1.0, 2.0], [1.0]], "labels": [0, 1], "num_classes": 2})")),
                         doctest::Contains("columns"), SchemaError);

    CHECK_THROWS_WITH_AS(load_hgjson(write_text("both_features.json", R"({
        "name": "x", "num_hypernodes": 1, "hyperedges": [[0]],
        "features": [[1.0]], "features_csv": "f.csv", "labels": [0], "num_classes": 2})")),
                         doctest::Contains("exactly one"), SchemaError);

    CHECK_THROWS_AS(load_hgjson(temp_dir() / "does_not_exist.json"), SchemaError);
    CHECK_THROWS_AS(load_hgjson(write_text("not_json.json", "pairs: 4")), SchemaError);
}

TEST_CASE("features can come from a sibling CSV") {
    write_text("feats.csv", "1.5,2.5\n-3.25,0.125\n");
    const Dataset ds = load_hgjson(write_text("csv_ds.json", R"({
        "name": "csv", "num_hypernodes": 2, "hyperedges": [[0, 1]],
        "features_csv": "feats.csv", "labels": [0, 1], "num_classes": 2})"));
    CHECK(ds.features == Matrix{{1.5, 2.5}, {-3.25, 0.125}});

    write_text("bad.csv", "1.0\nnan\n");
    CHECK_THROWS_WITH_AS(load_hgjson(write_text("bad_csv_ds.json", R"({
        "name": "csv", "num_hypernodes": 2, "hyperedges": [[0, 1]],
        "features_csv": "bad.csv", "labels": [0, 1], "num_classes": 2})")),
                         doctest::Contains("features_csv"), SchemaError);
}

TEST_CASE("save and load round-trip exactly") {
    RandomStream stream(71, 0);
    const fs::path path = temp_dir() / "roundtrip.json";
    for (int trial = 0; trial < 100; ++trial) {
        Dataset ds = random_dataset(stream);
        if (trial % 3 == 0 && ds.num_nodes() > 3 * ds.labels.num_classes)
            ds.splits = make_splits(ds.labels, 1, 1, stream.next_u64());
        save_hgjson(ds, path);
        CHECK(load_hgjson(path) == ds);
    }

    // the classic shortest-round-trip witness
    Dataset ds;
    ds.name = "tenth";
    ds.hypergraph = Hypergraph::make(1, {{0}});
    ds.features = Matrix{{0.1}};
    ds.labels = {{0}, 2};
    save_hgjson(ds, path);
    CHECK(load_hgjson(path).features(0, 0) == 0.1);
}

TEST_CASE("non-unit weights survive the round trip") {
    Dataset ds;
    ds.name = "weighted";
    ds.hypergraph = Hypergraph::make(3, {{0, 1}, {1, 2}}, {0.25, 3.5});
    ds.features = Matrix{{1.0}, {2.0}, {3.0}};
    ds.labels = {{0, 1, 0}, 2};
    const fs::path path = temp_dir() / "weighted.json";
    save_hgjson(ds, path);
    CHECK(load_hgjson(path) == ds);
}

TEST_CASE("planted partition generator") {
    SynthConfig cfg;
    cfg.num_nodes = 40;
    cfg.num_classes = 4;
    cfg.num_edges = 30;
    cfg.edge_size = 3;
    cfg.feature_dim = 6;
    cfg.seed = 9;

    SUBCASE("zero noise and full purity give exact centroids and pure edges") {
        cfg.noise_sigma = 0.0;
        cfg.p_intra = 1.0;
        const Dataset ds = gen_planted_partition(cfg);
        for (Index i = 0; i < ds.num_nodes(); ++i)
            for (Index k = 0; k < cfg.feature_dim; ++k)
                CHECK(ds.features(i, k) ==
                      (static_cast<Index>(ds.labels.values[static_cast<std::size_t>(i)]) == k
                           ? 1.0
                           : 0.0));
        for (const auto& edge : ds.hypergraph.hyperedges) {
            const int cls = ds.labels.values[static_cast<std::size_t>(edge.front())];
            for (Index v : edge) CHECK(ds.labels.values[static_cast<std::size_t>(v)] == cls);
        }
    }

    SUBCASE("identical seeds give identical datasets") {
        CHECK(gen_planted_partition(cfg) == gen_planted_partition(cfg));
    }

    SUBCASE("class counts are balanced within one") {
        const Dataset ds = gen_planted_partition(cfg);
        std::vector<int> counts(4, 0);
        for (int y : ds.labels.values) ++counts[static_cast<std::size_t>(y)];
        for (int c : counts) CHECK(std::abs(c - 10) <= 1);
    }

    SUBCASE("invalid configurations are rejected") {
        SynthConfig bad = cfg;
        bad.edge_size = 1;
        CHECK_THROWS_AS(gen_planted_partition(bad), SchemaError);
        bad = cfg;
        bad.p_intra = 0.0;
        CHECK_THROWS_AS(gen_planted_partition(bad), SchemaError);
        bad = cfg;
        bad.feature_dim = 2;
        CHECK_THROWS_AS(gen_planted_partition(bad), SchemaError);
    }
}

TEST_CASE("generator fingerprint stays pinned") {
    // golden pin of the deterministic output for the standard benchmark config
    SynthConfig cfg; // n=600, c=4, m=300, s=4, p=0.9, d=16, sigma=0.5, seed=42
    const Dataset ds = gen_planted_partition(cfg);
    const std::uint64_t fingerprint = test_support::fnv1a(to_hgjson_string(ds));
    CHECK(fingerprint == 0x4a8998ca939e6367ULL);
}

TEST_CASE("stratified splits") {
    const LabelVector labels{{0, 0, 1, 1}, 2};
    const SplitSpec spec = make_splits(labels, 1, 1, 5);
    CHECK(spec.train.size() == 2);
    CHECK(spec.val.size() == 1);
    CHECK(spec.test.size() == 1);
    spec.validate(4);
    // one train node per class
    CHECK(labels.values[static_cast<std::size_t>(spec.train[0])] !=
          labels.values[static_cast<std::size_t>(spec.train[1])]);

    CHECK(make_splits(labels, 1, 1, 5) == make_splits(labels, 1, 1, 5));
    CHECK_THROWS_WITH_AS(make_splits(labels, 3, 0, 5), doctest::Contains("class"), SchemaError);
    CHECK_THROWS_AS(make_splits(labels, 2, 1, 5), SchemaError);

    CHECK(default_val_total(600) == 60);
    CHECK(default_val_total(100000) == 500);
}

TEST_CASE("split validation rejects overlaps and bad indices") {
    SplitSpec spec{{0, 1}, {1}, {}};
    CHECK_THROWS_WITH_AS(spec.validate(3), doctest::Contains("more than one split"), SchemaError);
    SplitSpec oob{{0}, {5}, {}};
    CHECK_THROWS_AS(oob.validate(3), SchemaError);
    SplitSpec empty{{}, {0}, {1}};
    CHECK_THROWS_AS(empty.validate(3), SchemaError);
}
