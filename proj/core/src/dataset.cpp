#include "adhcn/dataset.hpp"

#include "adhcn/errors.hpp"
#include "adhcn/rng.hpp"
#include "adhcn/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace adhcn {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw SchemaError(field + ": " + what);
}

const json& require_field(const json& j, const char* field) {
    if (!j.contains(field)) fail(field, "missing required field");
    return j.at(field);
}

Index require_int(const json& j, const char* field) {
    const json& v = require_field(j, field);
    if (!v.is_number_integer()) fail(field, "expected an integer");
    return v.get<Index>();
}

std::vector<Index> parse_index_array(const json& v, const std::string& field) {
    if (!v.is_array()) fail(field, "expected an array");
    std::vector<Index> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) fail(field + "[" + std::to_string(i) + "]", "expected an integer");
        out.push_back(v[i].get<Index>());
    }
    return out;
}

Matrix parse_inline_features(const json& v, Index num_nodes) {
    if (!v.is_array()) fail("features", "expected an array of arrays");
    if (static_cast<Index>(v.size()) != num_nodes)
        fail("features", "expected " + std::to_string(num_nodes) + " rows, got " +
                             std::to_string(v.size()));
    if (v.empty() || !v[0].is_array() || v[0].empty())
        fail("features", "rows must be non-empty arrays");
    const Index dim = static_cast<Index>(v[0].size());
    Matrix features(num_nodes, dim);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& row = v[i];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim)
            fail("features[" + std::to_string(i) + "]",
                 "expected " + std::to_string(dim) + " columns, got " + std::to_string(row.size()));
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_number())
                fail("features[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                     "expected a number");
            const double x = row[j].get<double>();
            if (!std::isfinite(x))
                fail("features[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                     "not a finite number");
            features(static_cast<Index>(i), static_cast<Index>(j)) = x;
        }
    }
    return features;
}

Matrix parse_csv_features(const std::filesystem::path& path, Index num_nodes) {
    std::ifstream in(path);
    if (!in) fail("features_csv", "cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            double x = 0.0;
            const std::string_view cell(line.data() + start, comma - start);
            if (!parse_double(cell, x) || !std::isfinite(x))
                fail("features_csv", "line " + std::to_string(line_no) + ": bad value '" +
                                         std::string(cell) + "'");
            row.push_back(x);
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail("features_csv", "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(rows.front().size()) + " columns, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (static_cast<Index>(rows.size()) != num_nodes)
        fail("features_csv", "expected " + std::to_string(num_nodes) + " rows, got " +
                                 std::to_string(rows.size()));
    Matrix features(num_nodes, static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return features;
}

// partial Fisher-Yates: deterministically shuffles the first `take` slots
void shuffle_prefix(std::vector<Index>& items, std::size_t take, RandomStream& stream) {
    const std::size_t limit = std::min(take, items.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(items.size() - i));
        std::swap(items[i], items[j]);
    }
}

} // namespace

void SplitSpec::validate(Index num_nodes) const {
    if (train.empty()) throw SchemaError("splits.train: must be non-empty");
    std::unordered_set<Index> seen;
    const auto check = [&](const std::vector<Index>& part, const char* name) {
        for (Index i : part) {
            if (i < 0 || i >= num_nodes)
                throw SchemaError(std::string("splits.") + name + ": index " + std::to_string(i) +
                                  " out of range [0," + std::to_string(num_nodes) + ")");
            if (!seen.insert(i).second)
                throw SchemaError(std::string("splits.") + name + ": index " + std::to_string(i) +
                                  " appears in more than one split");
        }
    };
    check(train, "train");
    check(val, "val");
    check(test, "test");
}

void Dataset::validate() const {
    hypergraph.validate();
    if (features.rows() != hypergraph.num_nodes)
        throw SchemaError("features: row count " + std::to_string(features.rows()) +
                          " does not match num_hypernodes " + std::to_string(hypergraph.num_nodes));
    if (features.cols() < 1) throw SchemaError("features: at least one column required");
    if (!features.all_finite()) throw SchemaError("features: non-finite entries");
    if (labels.size() != hypergraph.num_nodes)
        throw SchemaError("labels: length " + std::to_string(labels.size()) +
                          " does not match num_hypernodes " + std::to_string(hypergraph.num_nodes));
    labels.validate();
    if (splits) splits->validate(hypergraph.num_nodes);
}

void SynthConfig::validate() const {
    if (num_nodes < 1) throw SchemaError("synth: num_nodes must be positive");
    if (num_classes < 2) throw SchemaError("synth: num_classes must be at least 2");
    if (num_edges < 1) throw SchemaError("synth: num_edges must be positive");
    if (edge_size < 2) throw SchemaError("synth: edge_size must be at least 2");
    if (edge_size > num_nodes) throw SchemaError("synth: edge_size exceeds num_nodes");
    if (!(p_intra > 0.0 && p_intra <= 1.0)) throw SchemaError("synth: p_intra must be in (0,1]");
    if (feature_dim < num_classes)
        throw SchemaError("synth: feature_dim must be at least num_classes for one-hot centroids");
    if (noise_sigma < 0.0) throw SchemaError("synth: noise_sigma must be nonnegative");
}

Dataset load_hgjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string() + ": cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw SchemaError(path.string() + ": top level must be a JSON object");

    Dataset ds;
    const json& name = require_field(j, "name");
    if (!name.is_string()) fail("name", "expected a string");
    ds.name = name.get<std::string>();

    const Index n = require_int(j, "num_hypernodes");

    const json& edges_json = require_field(j, "hyperedges");
    if (!edges_json.is_array()) fail("hyperedges", "expected an array of arrays");
    std::vector<std::vector<Index>> edges;
    edges.reserve(edges_json.size());
    for (std::size_t e = 0; e < edges_json.size(); ++e)
        edges.push_back(parse_index_array(edges_json[e], "hyperedges[" + std::to_string(e) + "]"));

    std::vector<double> weights;
    if (j.contains("hyperedge_weights")) {
        const json& w = j.at("hyperedge_weights");
        if (!w.is_array() || w.size() != edges.size())
            fail("hyperedge_weights", "expected an array with one weight per hyperedge");
        for (const auto& x : w) {
            if (!x.is_number()) fail("hyperedge_weights", "expected numbers");
            weights.push_back(x.get<double>());
        }
    }
    ds.hypergraph = Hypergraph::make(n, std::move(edges), std::move(weights));

    const bool has_inline = j.contains("features");
    const bool has_csv = j.contains("features_csv");
    if (has_inline == has_csv)
        fail("features", "provide exactly one of 'features' or 'features_csv'");
    if (has_inline) {
        ds.features = parse_inline_features(j.at("features"), n);
    } else {
        const json& rel = j.at("features_csv");
        if (!rel.is_string()) fail("features_csv", "expected a relative path string");
        ds.features = parse_csv_features(path.parent_path() / rel.get<std::string>(), n);
    }

    const json& labels_json = require_field(j, "labels");
    const auto raw_labels = parse_index_array(labels_json, "labels");
    if (static_cast<Index>(raw_labels.size()) != n)
        fail("labels", "expected " + std::to_string(n) + " entries, got " +
                           std::to_string(raw_labels.size()));
    ds.labels.values.assign(raw_labels.begin(), raw_labels.end());
    ds.labels.num_classes = static_cast<int>(require_int(j, "num_classes"));

    if (j.contains("splits")) {
        const json& s = j.at("splits");
        if (!s.is_object()) fail("splits", "expected an object with train/val/test");
        SplitSpec spec;
        spec.train = parse_index_array(require_field(s, "train"), "splits.train");
        spec.val = parse_index_array(require_field(s, "val"), "splits.val");
        spec.test = parse_index_array(require_field(s, "test"), "splits.test");
        ds.splits = std::move(spec);
    }

    ds.validate();
    return ds;
}

std::string to_hgjson_string(const Dataset& dataset) {
    dataset.validate();
    json j;
    j["name"] = dataset.name;
    j["num_hypernodes"] = dataset.hypergraph.num_nodes;
    j["hyperedges"] = dataset.hypergraph.hyperedges;
    const bool unit_weights = std::all_of(dataset.hypergraph.edge_weights.begin(),
                                          dataset.hypergraph.edge_weights.end(),
                                          [](double w) { return w == 1.0; });
    if (!unit_weights) j["hyperedge_weights"] = dataset.hypergraph.edge_weights;
    json feats = json::array();
    for (Index i = 0; i < dataset.features.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < dataset.features.cols(); ++k) row.push_back(dataset.features(i, k));
        feats.push_back(std::move(row));
    }
    j["features"] = std::move(feats);
    j["labels"] = dataset.labels.values;
    j["num_classes"] = dataset.labels.num_classes;
    if (dataset.splits) {
        j["splits"] = {{"train", dataset.splits->train},
                       {"val", dataset.splits->val},
                       {"test", dataset.splits->test}};
    }
    return j.dump(2) + "\n";
}

void save_hgjson(const Dataset& dataset, const std::filesystem::path& path) {
    const std::string text = to_hgjson_string(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError(path.string() + ": cannot open file for writing");
    out << text;
    if (!out) throw SchemaError(path.string() + ": write failed");
}

Dataset gen_planted_partition(const SynthConfig& config) {
    config.validate();
    RandomStream stream(config.seed, kStreamSynth);

    Dataset ds;
    ds.name = "planted-n" + std::to_string(config.num_nodes) + "-c" +
              std::to_string(config.num_classes) + "-m" + std::to_string(config.num_edges) + "-s" +
              std::to_string(config.edge_size) + "-seed" + std::to_string(config.seed);

    // round-robin class assignment
    ds.labels.num_classes = static_cast<int>(config.num_classes);
    ds.labels.values.resize(static_cast<std::size_t>(config.num_nodes));
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(config.num_classes));
    for (Index i = 0; i < config.num_nodes; ++i) {
        const Index cls = i % config.num_classes;
        ds.labels.values[static_cast<std::size_t>(i)] = static_cast<int>(cls);
        members[static_cast<std::size_t>(cls)].push_back(i);
    }

    std::vector<Index> all_nodes(static_cast<std::size_t>(config.num_nodes));
    for (Index i = 0; i < config.num_nodes; ++i) all_nodes[static_cast<std::size_t>(i)] = i;

    std::vector<std::vector<Index>> edges;
    edges.reserve(static_cast<std::size_t>(config.num_edges));
    const std::size_t edge_size = static_cast<std::size_t>(config.edge_size);
    for (Index e = 0; e < config.num_edges; ++e) {
        std::vector<Index> pool;
        if (stream.uniform() < config.p_intra) {
            int attempts = 0;
            for (;;) {
                const auto cls = static_cast<std::size_t>(
                    stream.uniform_int(static_cast<std::uint64_t>(config.num_classes)));
                if (members[cls].size() >= edge_size) {
                    pool = members[cls];
                    break;
                }
                if (++attempts == 100)
                    throw SchemaError("synth: no class has " + std::to_string(config.edge_size) +
                                      " members after 100 attempts");
            }
        } else {
            pool = all_nodes;
        }
        shuffle_prefix(pool, edge_size, stream);
        std::vector<Index> edge(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(edge_size));
        std::sort(edge.begin(), edge.end());
        edges.push_back(std::move(edge));
    }
    ds.hypergraph = Hypergraph::make(config.num_nodes, std::move(edges));

    ds.features = Matrix(config.num_nodes, config.feature_dim);
    for (Index i = 0; i < config.num_nodes; ++i) {
        const int cls = ds.labels.values[static_cast<std::size_t>(i)];
        for (Index k = 0; k < config.feature_dim; ++k) {
            const double centroid = (static_cast<Index>(cls) == k) ? 1.0 : 0.0;
            ds.features(i, k) = centroid + config.noise_sigma * stream.normal();
        }
    }

    ds.validate();
    return ds;
}

SplitSpec make_splits(const LabelVector& labels, Index train_per_class, Index val_total,
                      std::uint64_t seed) {
    labels.validate();
    if (train_per_class < 1) throw SchemaError("splits: train_per_class must be positive");
    if (val_total < 0) throw SchemaError("splits: val_total must be nonnegative");
    RandomStream stream(seed, kStreamSplit);

    std::vector<std::vector<Index>> members(static_cast<std::size_t>(labels.num_classes));
    for (Index i = 0; i < labels.size(); ++i)
        members[static_cast<std::size_t>(labels.values[static_cast<std::size_t>(i)])].push_back(i);

    SplitSpec spec;
    std::vector<Index> pool;
    for (int cls = 0; cls < labels.num_classes; ++cls) {
        auto& nodes = members[static_cast<std::size_t>(cls)];
        if (static_cast<Index>(nodes.size()) < train_per_class)
            throw SchemaError("splits: class " + std::to_string(cls) + " has " +
                              std::to_string(nodes.size()) + " nodes, need " +
                              std::to_string(train_per_class) + " for training");
        shuffle_prefix(nodes, nodes.size(), stream);
        spec.train.insert(spec.train.end(), nodes.begin(),
                          nodes.begin() + static_cast<std::ptrdiff_t>(train_per_class));
        pool.insert(pool.end(), nodes.begin() + static_cast<std::ptrdiff_t>(train_per_class),
                    nodes.end());
    }
    if (static_cast<Index>(pool.size()) < val_total)
        throw SchemaError("splits: not enough nodes left for validation (" +
                          std::to_string(pool.size()) + " < " + std::to_string(val_total) + ")");
    std::sort(pool.begin(), pool.end());
    shuffle_prefix(pool, pool.size(), stream);
    spec.val.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(val_total));
    spec.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(val_total), pool.end());

    std::sort(spec.train.begin(), spec.train.end());
    std::sort(spec.val.begin(), spec.val.end());
    std::sort(spec.test.begin(), spec.test.end());
    spec.validate(labels.size());
    return spec;
}

Index default_val_total(Index num_nodes) { return std::min<Index>(500, num_nodes / 10); }

} // namespace adhcn
