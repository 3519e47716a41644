// adhcn command-line tool: train/evaluate, line-expand, synthesize data,
// verify gradients, and sweep fusion strategies into a report.
//
// Exit codes: 0 success, 1 usage, 2 data/schema, 3 numerical failure.

#include "adhcn/checkpoint.hpp"
#include "adhcn/dataset.hpp"
#include "adhcn/errors.hpp"
#include "adhcn/gradcheck.hpp"
#include "adhcn/line_expansion.hpp"
#include "adhcn/metrics.hpp"
#include "adhcn/model.hpp"
#include "adhcn/text.hpp"
#include "adhcn/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace {

using adhcn::Index;
using json = nlohmann::ordered_json;

// ADHCN_THREADS caps sweep parallelism; 0 selects the sequential
// deterministic mode whose output files are byte-reproducible.
struct ThreadMode {
    bool deterministic = false;
    unsigned threads = 1;
};

ThreadMode thread_mode() {
    ThreadMode mode;
    const char* env = std::getenv("ADHCN_THREADS");
    if (!env) {
        mode.threads = std::max(1u, std::thread::hardware_concurrency());
        return mode;
    }
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed <= 0) {
        mode.deterministic = true;
        mode.threads = 1;
    } else {
        mode.threads = static_cast<unsigned>(parsed);
    }
    return mode;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw adhcn::SchemaError(path.string() + ": cannot open file for writing");
    out << text;
    if (!out) throw adhcn::SchemaError(path.string() + ": write failed");
}

std::string curves_csv(const adhcn::TrainReport& report) {
    std::string text = "epoch,train_loss,train_acc,val_acc\n";
    for (std::size_t i = 0; i < report.curve.size(); ++i) {
        const auto& row = report.curve[i];
        text += std::to_string(i + 1) + "," + adhcn::format_double(row.train_loss) + "," +
                adhcn::format_double(row.train_acc) + "," + adhcn::format_double(row.val_acc) + "\n";
    }
    return text;
}

std::string embeddings_csv(const adhcn::Matrix& z) {
    std::string text;
    for (Index i = 0; i < z.rows(); ++i) {
        for (Index j = 0; j < z.cols(); ++j) {
            if (j > 0) text += ",";
            text += adhcn::format_double(z(i, j));
        }
        text += "\n";
    }
    return text;
}

json metrics_json(const adhcn::SplitMetrics& m) {
    return {{"accuracy", m.accuracy},
            {"macro_recall", m.macro_recall},
            {"macro_f1", m.macro_f1},
            {"micro_recall", m.micro_recall}};
}

struct TrainArgs {
    std::string data;
    std::string fusion = "attention";
    std::uint64_t seed = 42;
    Index epochs = 200;
    double lr = 0.001;
    double weight_decay = 0.0005;
    Index hidden = 64;
    double dropout = 0.5;
    Index patience = 50;
    std::string out_metrics = "metrics.json";
    std::string out_curves = "curves.csv";
    std::string out_embeddings;
    std::string checkpoint;
};

adhcn::Dataset load_with_splits(const std::string& path, std::uint64_t seed) {
    adhcn::Dataset dataset = adhcn::load_hgjson(path);
    if (!dataset.splits) {
        dataset.splits = adhcn::make_splits(dataset.labels, 20,
                                            adhcn::default_val_total(dataset.num_nodes()), seed);
        std::cout << "no splits in " << path << "; using stratified defaults (20/class train, "
                  << dataset.splits->val.size() << " val)\n";
    }
    return dataset;
}

int cmd_train(const TrainArgs& args) {
    const ThreadMode mode = thread_mode();
    adhcn::TrainConfig config;
    config.fusion = adhcn::FusionStrategy::parse(args.fusion);
    config.seed = args.seed;
    config.max_epochs = args.epochs;
    config.learning_rate = args.lr;
    config.weight_decay = args.weight_decay;
    config.hidden = args.hidden;
    config.dropout = args.dropout;
    config.patience = args.patience;
    config.validate();

    const adhcn::Dataset dataset = load_with_splits(args.data, args.seed);
    auto [params, report] = adhcn::train(dataset, config);

    json doc;
    doc["command"] = "train";
    doc["config"] = {{"data", args.data},
                     {"fusion", config.fusion.to_string()},
                     {"seed", config.seed},
                     {"epochs", config.max_epochs},
                     {"lr", config.learning_rate},
                     {"weight_decay", config.weight_decay},
                     {"hidden", config.hidden},
                     {"dropout", config.dropout},
                     {"patience", config.patience}};
    doc["dataset"] = {{"name", dataset.name},
                      {"num_hypernodes", dataset.num_nodes()},
                      {"num_hyperedges", dataset.hypergraph.num_edges()},
                      {"num_features", dataset.features.cols()},
                      {"num_classes", dataset.labels.num_classes}};
    doc["seed"] = config.seed;
    doc["epochs_run"] = report.epochs_run;
    doc["best_epoch"] = report.best_epoch;
    doc["metrics"] = {{"train", metrics_json(report.train)},
                      {"val", metrics_json(report.val)},
                      {"test", metrics_json(report.test)}};
    // In deterministic mode (ADHCN_THREADS=0) the document must be
    // byte-reproducible, so the measured time is reported on stdout only.
    doc["wall_clock_sec"] = mode.deterministic ? 0.0 : report.wall_clock_sec;

    write_file(args.out_metrics, doc.dump(2) + "\n");
    write_file(args.out_curves, curves_csv(report));
    if (!args.out_embeddings.empty())
        write_file(args.out_embeddings, embeddings_csv(adhcn::final_embeddings(dataset, params)));
    if (!args.checkpoint.empty()) adhcn::save_checkpoint(params, config, args.checkpoint);

    std::cout << "trained " << dataset.name << " with " << config.fusion.to_string() << ": "
              << report.epochs_run << " epochs (best " << report.best_epoch << "), test acc "
              << adhcn::format_double(report.test.accuracy) << ", macro-R "
              << adhcn::format_double(report.test.macro_recall) << ", macro-F1 "
              << adhcn::format_double(report.test.macro_f1) << ", "
              << adhcn::format_double(report.wall_clock_sec) << "s\n";
    std::cout << "wrote " << args.out_metrics << " and " << args.out_curves << "\n";
    return 0;
}

struct ExpandArgs {
    std::string data;
    std::string out;
    bool stats = false;
};

int cmd_expand(const ExpandArgs& args) {
    const adhcn::Dataset dataset = adhcn::load_hgjson(args.data);
    const adhcn::LEGraph le = adhcn::line_expand(dataset.hypergraph);

    if (!args.out.empty()) {
        json doc;
        json pairs = json::array();
        for (const auto& [v, e] : le.pairs) pairs.push_back({v, e});
        doc["pairs"] = std::move(pairs);
        json edges = json::array();
        const auto& adj = le.adjacency;
        for (Index i = 0; i < adj.rows(); ++i) {
            for (Index k = adj.row_offsets()[static_cast<std::size_t>(i)];
                 k < adj.row_offsets()[static_cast<std::size_t>(i) + 1]; ++k) {
                const Index j = adj.col_indices()[static_cast<std::size_t>(k)];
                if (j > i) edges.push_back({i, j, adj.values()[static_cast<std::size_t>(k)]});
            }
        }
        doc["edges"] = std::move(edges);
        write_file(args.out, doc.dump(2) + "\n");
        std::cout << "wrote " << args.out << "\n";
    }

    const Index edge_count = le.adjacency.nnz() / 2;
    std::cout << "pairs: " << le.num_pairs() << "\n";
    std::cout << "edges: " << edge_count << "\n";
    if (args.stats) {
        std::map<Index, Index> histogram;
        const auto& offsets = le.adjacency.row_offsets();
        for (Index p = 0; p < le.num_pairs(); ++p)
            ++histogram[offsets[static_cast<std::size_t>(p) + 1] -
                        offsets[static_cast<std::size_t>(p)]];
        std::cout << "degree histogram:\n";
        for (const auto& [degree, count] : histogram)
            std::cout << "  " << degree << ": " << count << "\n";
        double mean_size = 0.0;
        for (const auto& edge : dataset.hypergraph.hyperedges)
            mean_size += static_cast<double>(edge.size());
        mean_size /= static_cast<double>(dataset.hypergraph.num_edges());
        std::cout << "mean hyperedge size: " << adhcn::format_double(mean_size) << "\n";
    }
    return 0;
}

struct GensynthArgs {
    adhcn::SynthConfig config;
    std::string out;
    Index train_per_class = 20;
    Index val_total = -1; // -1 = min(500, n/10)
    bool no_splits = false;
};

int cmd_gensynth(const GensynthArgs& args) {
    adhcn::Dataset dataset = adhcn::gen_planted_partition(args.config);
    if (!args.no_splits) {
        const Index val = args.val_total >= 0 ? args.val_total
                                              : adhcn::default_val_total(args.config.num_nodes);
        dataset.splits =
            adhcn::make_splits(dataset.labels, args.train_per_class, val, args.config.seed);
    }
    adhcn::save_hgjson(dataset, args.out);
    std::cout << "wrote " << args.out << ": " << dataset.num_nodes() << " nodes, "
              << dataset.hypergraph.num_edges() << " hyperedges, "
              << dataset.labels.num_classes << " classes\n";
    return 0;
}

struct GradcheckArgs {
    adhcn::GradCheckOptions options;
    std::string fusion = "attention";
};

int cmd_gradcheck(const GradcheckArgs& args) {
    adhcn::GradCheckOptions options = args.options;
    options.strategy = adhcn::FusionStrategy::parse(args.fusion);
    std::cout << "gradient check: n=" << options.num_nodes << " m=" << options.num_edges
              << " d=" << options.num_features << " h=" << options.hidden
              << " c=" << options.num_classes << " fusion=" << options.strategy.to_string()
              << " seed=" << options.seed << " eps=" << adhcn::format_double(options.step)
              << " tol=" << adhcn::format_double(options.tolerance) << "\n";
    const adhcn::GradCheckResult result = adhcn::gradient_check(options);
    for (const auto& group : result.groups)
        std::printf("  %-24s max_rel_err=%.3e\n", group.name.c_str(), group.max_rel_error);
    const bool ok = result.passed(options.tolerance);
    std::cout << "result: " << (ok ? "PASS" : "FAIL") << " (max "
              << adhcn::format_double(result.max_rel_error) << " vs tol "
              << adhcn::format_double(options.tolerance) << ")\n";
    return ok ? 0 : 3;
}

struct ReportArgs {
    std::vector<std::string> datasets;
    std::string seeds = "1,2,3";
    std::string out_md = "report.md";
    std::string out_csv = "report.csv";
    Index epochs = 200;
    double lr = 0.001;
    double weight_decay = 0.0005;
    Index hidden = 64;
    double dropout = 0.5;
    Index patience = 50;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
    return seeds;
}

std::vector<std::string> sweep_strategies() {
    std::vector<std::string> strategies{"attention", "attention-nocommon", "commconv"};
    for (int i = 1; i <= 9; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "fixed:0.%d", i);
        strategies.emplace_back(buf);
    }
    strategies.emplace_back("le-only");
    strategies.emplace_back("hg-only");
    return strategies;
}

struct CellResult {
    bool failed = false;
    std::string error;
    adhcn::SplitMetrics test;
};

struct RowStats {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 for a single seed
};

RowStats stats_of(const std::vector<double>& xs) {
    RowStats s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double sq = 0.0;
        for (double x : xs) sq += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(xs.size() - 1));
    }
    return s;
}

std::string mean_std(const RowStats& s) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f ± %.4f", s.mean, s.stddev);
    return buf;
}

int cmd_report(const ReportArgs& args) {
    const ThreadMode mode = thread_mode();
    const auto seeds = parse_seed_list(args.seeds);
    const auto strategies = sweep_strategies();

    struct Cell {
        std::size_t dataset;
        std::size_t strategy;
        std::size_t seed;
    };
    std::vector<adhcn::Dataset> datasets;
    for (const auto& path : args.datasets) datasets.push_back(load_with_splits(path, seeds[0]));

    std::vector<Cell> cells;
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t s = 0; s < strategies.size(); ++s)
            for (std::size_t k = 0; k < seeds.size(); ++k) cells.push_back({d, s, k});
    std::vector<CellResult> results(cells.size());

    const auto run_cell = [&](std::size_t idx) {
        const Cell& cell = cells[idx];
        CellResult& out = results[idx];
        try {
            adhcn::TrainConfig config;
            config.fusion = adhcn::FusionStrategy::parse(strategies[cell.strategy]);
            config.seed = seeds[cell.seed];
            config.max_epochs = args.epochs;
            config.learning_rate = args.lr;
            config.weight_decay = args.weight_decay;
            config.hidden = args.hidden;
            config.dropout = args.dropout;
            config.patience = args.patience;
            out.test = adhcn::train(datasets[cell.dataset], config).second.test;
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
        }
    };

    // Every cell owns a seed-derived stream, so results are schedule-free.
    const unsigned workers = std::min<unsigned>(mode.threads, static_cast<unsigned>(cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    std::string md = "# ADHCN fusion strategy sweep\n";
    std::string csv =
        "dataset,strategy,seeds,acc_mean,acc_std,recall_mean,recall_std,f1_mean,f1_std,failed\n";
    std::string seed_list;
    for (std::size_t k = 0; k < seeds.size(); ++k)
        seed_list += (k ? "," : "") + std::to_string(seeds[k]);

    for (std::size_t d = 0; d < datasets.size(); ++d) {
        md += "\n## " + datasets[d].name + " (seeds " + seed_list + ")\n\n";
        md += "| strategy | acc | macro-R | macro-F1 |\n";
        md += "|---|---|---|---|\n";
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            std::vector<double> acc, rec, f1;
            std::size_t failures = 0;
            std::string first_error;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].dataset != d || cells[i].strategy != s) continue;
                if (results[i].failed) {
                    ++failures;
                    if (first_error.empty()) first_error = results[i].error;
                    continue;
                }
                acc.push_back(results[i].test.accuracy);
                rec.push_back(results[i].test.macro_recall);
                f1.push_back(results[i].test.macro_f1);
            }
            if (acc.empty()) {
                md += "| " + strategies[s] + " | failed | failed | failed |\n";
                csv += datasets[d].name + "," + strategies[s] + ",0,,,,,,," +
                       std::to_string(failures) + "\n";
                if (!first_error.empty())
                    std::cerr << datasets[d].name << "/" << strategies[s] << ": " << first_error
                              << "\n";
                continue;
            }
            const RowStats a = stats_of(acc), r = stats_of(rec), f = stats_of(f1);
            md += "| " + strategies[s] + " | " + mean_std(a) + " | " + mean_std(r) + " | " +
                  mean_std(f) + " |\n";
            csv += datasets[d].name + "," + strategies[s] + "," + std::to_string(acc.size()) + "," +
                   adhcn::format_double(a.mean) + "," + adhcn::format_double(a.stddev) + "," +
                   adhcn::format_double(r.mean) + "," + adhcn::format_double(r.stddev) + "," +
                   adhcn::format_double(f.mean) + "," + adhcn::format_double(f.stddev) + "," +
                   std::to_string(failures) + "\n";
        }
    }

    write_file(args.out_md, md);
    write_file(args.out_csv, csv);
    std::cout << "wrote " << args.out_md << " and " << args.out_csv << " (" << cells.size()
              << " cells)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ADHCN: adaptive dual-channel hypergraph convolution"};
    app.require_subcommand(1);

    const auto fusion_check = [](const std::string& text) -> std::string {
        try {
            adhcn::FusionStrategy::parse(text);
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        return {};
    };

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "train and evaluate a node classifier");
    train_cmd->add_option("--data", train_args.data, "HGJSON dataset path")->required();
    train_cmd->add_option("--fusion", train_args.fusion, "fusion strategy")->check(fusion_check);
    train_cmd->add_option("--seed", train_args.seed, "random seed");
    train_cmd->add_option("--epochs", train_args.epochs, "maximum training epochs");
    train_cmd->add_option("--lr", train_args.lr, "Adam learning rate");
    train_cmd->add_option("--weight-decay", train_args.weight_decay, "L2 weight decay");
    train_cmd->add_option("--hidden", train_args.hidden, "hidden width of both channels");
    train_cmd->add_option("--dropout", train_args.dropout, "input dropout rate");
    train_cmd->add_option("--patience", train_args.patience, "early-stopping patience");
    train_cmd->add_option("--out-metrics", train_args.out_metrics, "metrics JSON output path");
    train_cmd->add_option("--out-curves", train_args.out_curves, "curves CSV output path");
    train_cmd->add_option("--out-embeddings", train_args.out_embeddings, "Z_out CSV output path");
    train_cmd->add_option("--checkpoint", train_args.checkpoint, "checkpoint output path");

    ExpandArgs expand_args;
    CLI::App* expand_cmd = app.add_subcommand("expand", "line-expand a hypergraph");
    expand_cmd->add_option("--data", expand_args.data, "HGJSON dataset path")->required();
    expand_cmd->add_option("--out", expand_args.out, "HGJSON-LE output path");
    expand_cmd->add_flag("--stats", expand_args.stats, "print degree histogram");

    GensynthArgs gensynth_args;
    CLI::App* gensynth_cmd =
        app.add_subcommand("gensynth", "generate a planted-partition dataset");
    gensynth_cmd->add_option("--out", gensynth_args.out, "HGJSON output path")->required();
    gensynth_cmd->add_option("--nodes", gensynth_args.config.num_nodes, "hypernode count");
    gensynth_cmd->add_option("--classes", gensynth_args.config.num_classes, "class count");
    gensynth_cmd->add_option("--edges", gensynth_args.config.num_edges, "hyperedge count");
    gensynth_cmd->add_option("--edge-size", gensynth_args.config.edge_size, "hyperedge size");
    gensynth_cmd->add_option("--p-intra", gensynth_args.config.p_intra,
                             "probability of a class-pure hyperedge");
    gensynth_cmd->add_option("--dim", gensynth_args.config.feature_dim, "feature dimension");
    gensynth_cmd->add_option("--sigma", gensynth_args.config.noise_sigma, "feature noise stddev");
    gensynth_cmd->add_option("--seed", gensynth_args.config.seed, "random seed");
    gensynth_cmd->add_option("--train-per-class", gensynth_args.train_per_class,
                             "training nodes per class");
    gensynth_cmd->add_option("--val", gensynth_args.val_total,
                             "validation node count (default min(500, n/10))");
    gensynth_cmd->add_flag("--no-splits", gensynth_args.no_splits, "omit train/val/test splits");

    GradcheckArgs gradcheck_args;
    CLI::App* gradcheck_cmd =
        app.add_subcommand("gradcheck", "finite-difference gradient verification");
    gradcheck_cmd->add_option("--seed", gradcheck_args.options.seed, "instance seed");
    gradcheck_cmd->add_option("--eps", gradcheck_args.options.step, "finite-difference step");
    gradcheck_cmd->add_option("--tol", gradcheck_args.options.tolerance,
                              "max relative error tolerance");
    gradcheck_cmd->add_option("--nodes", gradcheck_args.options.num_nodes, "instance node count");
    gradcheck_cmd->add_option("--edges", gradcheck_args.options.num_edges, "instance edge count");
    gradcheck_cmd->add_option("--dim", gradcheck_args.options.num_features, "feature dimension");
    gradcheck_cmd->add_option("--hidden", gradcheck_args.options.hidden, "hidden width");
    gradcheck_cmd->add_option("--classes", gradcheck_args.options.num_classes, "class count");
    gradcheck_cmd->add_option("--fusion", gradcheck_args.fusion, "fusion strategy")
        ->check(fusion_check);
    gradcheck_cmd
        ->add_flag("--corrupt", gradcheck_args.options.corrupt_gradient,
                   "test hook: corrupt one analytic gradient entry")
        ->group(""); // hidden
    gradcheck_cmd->add_option("--weight-decay", gradcheck_args.options.weight_decay,
                              "L2 weight decay used in the checked loss");

    ReportArgs report_args;
    CLI::App* report_cmd =
        app.add_subcommand("report", "fusion-strategy sweep over datasets and seeds");
    report_cmd->add_option("--data", report_args.datasets, "HGJSON dataset paths")
        ->required()
        ->expected(-1);
    report_cmd->add_option("--seeds", report_args.seeds, "comma-separated seed list");
    report_cmd->add_option("--out-md", report_args.out_md, "markdown table output path");
    report_cmd->add_option("--out-csv", report_args.out_csv, "CSV output path");
    report_cmd->add_option("--epochs", report_args.epochs, "maximum training epochs");
    report_cmd->add_option("--lr", report_args.lr, "Adam learning rate");
    report_cmd->add_option("--weight-decay", report_args.weight_decay, "L2 weight decay");
    report_cmd->add_option("--hidden", report_args.hidden, "hidden width");
    report_cmd->add_option("--dropout", report_args.dropout, "input dropout rate");
    report_cmd->add_option("--patience", report_args.patience, "early-stopping patience");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (expand_cmd->parsed()) return cmd_expand(expand_args);
        if (gensynth_cmd->parsed()) return cmd_gensynth(gensynth_args);
        if (gradcheck_cmd->parsed()) return cmd_gradcheck(gradcheck_args);
        if (report_cmd->parsed()) return cmd_report(report_args);
    } catch (const adhcn::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const adhcn::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
