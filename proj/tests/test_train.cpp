#include "adhcn/adam.hpp"
#include "adhcn/checkpoint.hpp"
#include "adhcn/dataset.hpp"
#include "adhcn/errors.hpp"
#include "adhcn/gradcheck.hpp"
#include "adhcn/model.hpp"
#include "adhcn/train.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace adhcn;

namespace {

std::vector<Index> full_mask(Index n) {
    std::vector<Index> mask(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) mask[static_cast<std::size_t>(i)] = i;
    return mask;
}

Dataset quick_dataset(std::uint64_t seed, Index train_per_class = 20, Index val = 40) {
    SynthConfig cfg;
    cfg.num_nodes = 200;
    cfg.num_classes = 4;
    cfg.num_edges = 200;
    cfg.edge_size = 4;
    cfg.p_intra = 1.0;
    cfg.feature_dim = 8;
    cfg.noise_sigma = 0.1;
    cfg.seed = seed;
    Dataset ds = gen_planted_partition(cfg);
    ds.splits = make_splits(ds.labels, train_per_class, val, seed);
    return ds;
}

} // namespace

TEST_CASE("classify") {
    const Matrix z{{0.0, 0.0}, {1.0, -1.0}};
    const Matrix w_zero(2, 3);
    const Matrix b_zero(1, 3);
    const Matrix uniform = classify(z, w_zero, b_zero);
    for (Index i = 0; i < 2; ++i)
        for (Index c = 0; c < 3; ++c)
            CHECK(uniform(i, c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // logits [ln 1, ln 3] -> probs [0.25, 0.75]
    Matrix w(1, 2);
    w(0, 0) = std::log(1.0);
    w(0, 1) = std::log(3.0);
    const Matrix probs = classify(Matrix{{1.0}}, w, Matrix(1, 2));
    CHECK(probs(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(probs(0, 1) == doctest::Approx(0.75).epsilon(1e-12));

    // shifting every logit of a row leaves the row unchanged
    Matrix b_shift(1, 2, 17.5);
    const Matrix shifted = classify(Matrix{{1.0}}, w, b_shift);
    CHECK(shifted(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(shifted(0, 1) == doctest::Approx(0.75).epsilon(1e-12));

    // rows always sum to one
    for (Index i = 0; i < 2; ++i) {
        double sum = 0.0;
        for (Index c = 0; c < 3; ++c) sum += uniform(i, c);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("prediction breaks ties toward the lowest class") {
    const Matrix probs{{0.4, 0.4, 0.2}, {0.2, 0.4, 0.4}};
    CHECK(predict(probs) == std::vector<int>{0, 1});
}

TEST_CASE("cross entropy") {
    Matrix onehot(2, 2);
    onehot(0, 0) = 1.0;
    onehot(1, 1) = 1.0;
    CHECK(cross_entropy(onehot, {{0, 1}, 2}, full_mask(2)) == 0.0);

    const Matrix uniform2(2, 2, 0.5);
    CHECK(cross_entropy(uniform2, {{0, 1}, 2}, full_mask(2)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const Matrix uniform10(3, 10, 0.1);
    CHECK(cross_entropy(uniform10, {{0, 5, 9}, 10}, full_mask(3)) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-12));

    // a zero probability for the true class hits the 1e-12 clamp
    Matrix confident(1, 2);
    confident(0, 1) = 1.0;
    CHECK(cross_entropy(confident, {{0}, 2}, full_mask(1)) ==
          doctest::Approx(-std::log(1e-12)).epsilon(1e-12));

    CHECK_THROWS_AS(cross_entropy(uniform2, {{0, 1}, 2}, std::vector<Index>{}),
                    std::invalid_argument);
}

TEST_CASE("classifier bias gradient at the all-zero point is the closed form") {
    const Hypergraph hg = Hypergraph::make(4, {{0, 1}, {1, 2, 3}});
    const PipelineOperators ops = PipelineOperators::build(hg);
    const Matrix x(4, 3); // zero features
    const LabelVector labels{{0, 1, 2, 1}, 3};
    const std::vector<Index> mask{0, 1, 3};
    const ModelParams params = zero_params({3, 5, 3}, FusionStrategy{});

    const GradientResult grads = compute_gradients(ops, x, labels, mask, params, 0.0);
    // (uniform - onehot) averaged over the mask
    const double third = 1.0 / 3.0;
    const Matrix& db = grads.gradients.classifier_bias;
    CHECK(db(0, 0) == doctest::Approx((third - 1.0 + third + third) / 3.0).epsilon(1e-12));
    CHECK(db(0, 1) == doctest::Approx((third + third - 1.0 + third - 1.0) / 3.0).epsilon(1e-12));
    CHECK(db(0, 2) == doctest::Approx(third).epsilon(1e-12));
    // nothing flows past ReLU(0) with zero inputs, so every other block is zero
    for (double v : grads.gradients.classifier_weight.data()) CHECK(v == 0.0);
    for (double v : grads.gradients.hg_channel.weight.data()) CHECK(v == 0.0);
    for (double v : grads.gradients.attention.query.data()) CHECK(v == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    for (const char* strategy : {"attention", "commconv", "fixed:0.35"}) {
        GradCheckOptions opt;
        opt.strategy = FusionStrategy::parse(strategy);
        const GradCheckResult result = gradient_check(opt);
        CAPTURE(strategy);
        CHECK(result.max_rel_error < 1e-4);
        CHECK(result.groups.size() >= 6);
    }
}

TEST_CASE("the corrupt-gradient hook is detected") {
    GradCheckOptions opt;
    opt.corrupt_gradient = true;
    CHECK_FALSE(gradient_check(opt).passed(opt.tolerance));
}

TEST_CASE("evaluate_loss agrees with the training-step loss") {
    const Hypergraph hg = Hypergraph::make(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}});
    const PipelineOperators ops = PipelineOperators::build(hg);
    Matrix x(6, 4);
    RandomStream stream(17, 0);
    for (double& v : x.data()) v = stream.normal();
    const LabelVector labels{{0, 1, 2, 0, 1, 2}, 3};
    RandomStream init(17, kStreamInit);
    const ModelParams params = init_params({4, 5, 3}, FusionStrategy{}, init);
    const auto mask = full_mask(6);

    const GradientResult step = compute_gradients(ops, x, labels, mask, params, 0.0005);
    CHECK(evaluate_loss(ops, x, labels, mask, params, 0.0005) == step.total_loss);
}

TEST_CASE("doubling weight decay doubles the decay component") {
    const Hypergraph hg = Hypergraph::make(5, {{0, 1, 2}, {2, 3, 4}});
    const PipelineOperators ops = PipelineOperators::build(hg);
    Matrix x(5, 3);
    RandomStream stream(3, 0);
    for (double& v : x.data()) v = stream.normal();
    const LabelVector labels{{0, 1, 0, 1, 0}, 2};
    RandomStream init(3, kStreamInit);
    const ModelParams params = init_params({3, 4, 2}, FusionStrategy{}, init);
    const auto mask = full_mask(5);

    const Matrix g0 = compute_gradients(ops, x, labels, mask, params, 0.0).gradients.hg_channel.weight;
    const Matrix g1 =
        compute_gradients(ops, x, labels, mask, params, 0.01).gradients.hg_channel.weight;
    const Matrix g2 =
        compute_gradients(ops, x, labels, mask, params, 0.02).gradients.hg_channel.weight;
    for (std::size_t i = 0; i < g0.data().size(); ++i)
        CHECK(g2.data()[i] - g0.data()[i] ==
              doctest::Approx(2.0 * (g1.data()[i] - g0.data()[i])).epsilon(1e-9));
}

TEST_CASE("adam first step and invariants") {
    const ModelDims dims{1, 1, 2};
    ModelParams params = zero_params(dims, FusionStrategy::parse("hg-only"));
    ModelParams grads = zero_params(dims, FusionStrategy::parse("hg-only"));
    grads.hg_channel.weight(0, 0) = 1.0;
    AdamState state = AdamState::init(params);

    adam_step(params, grads, state, 0.001);
    // bias-corrected m_hat/v_hat are both 1 on the first step
    CHECK(params.hg_channel.weight(0, 0) == doctest::Approx(-0.001).epsilon(1e-7));
    CHECK(params.hg_channel.bias(0, 0) == 0.0);

    // zero gradients keep parameters fixed
    ModelParams zero_grads = zero_params(dims, FusionStrategy::parse("hg-only"));
    ModelParams before = params;
    AdamState fresh = AdamState::init(params);
    adam_step(params, zero_grads, fresh, 0.001);
    CHECK(params == before);

    // first-step sign is the negated gradient sign
    ModelParams signs = zero_params(dims, FusionStrategy::parse("hg-only"));
    ModelParams sgrads = zero_params(dims, FusionStrategy::parse("hg-only"));
    sgrads.hg_channel.weight(0, 0) = -3.7;
    sgrads.classifier_weight(0, 0) = 0.004;
    AdamState sstate = AdamState::init(signs);
    adam_step(signs, sgrads, sstate, 0.01);
    CHECK(signs.hg_channel.weight(0, 0) > 0.0);
    CHECK(signs.classifier_weight(0, 0) < 0.0);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const Dataset ds = quick_dataset(3, 5, 20);
    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse("attention");
    cfg.max_epochs = 12;
    cfg.seed = 99;
    const auto [params1, report1] = train(ds, cfg);
    const auto [params2, report2] = train(ds, cfg);
    CHECK(params1 == params2);
    REQUIRE(report1.curve.size() == report2.curve.size());
    for (std::size_t i = 0; i < report1.curve.size(); ++i) {
        CHECK(report1.curve[i].train_loss == report2.curve[i].train_loss);
        CHECK(report1.curve[i].train_acc == report2.curve[i].train_acc);
        CHECK(report1.curve[i].val_acc == report2.curve[i].val_acc);
    }
}

TEST_CASE("a separable planted partition is learned") {
    const Dataset ds = quick_dataset(7);
    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse("attention");
    cfg.max_epochs = 120;
    cfg.learning_rate = 0.005;
    cfg.seed = 1;
    const auto [params, report] = train(ds, cfg);
    CHECK(report.test.accuracy >= 0.90);
}

TEST_CASE("zero-epoch training reports the initialized model") {
    const Dataset ds = quick_dataset(5, 5, 20);
    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse("attention");
    cfg.max_epochs = 0;
    const auto [params, report] = train(ds, cfg);
    CHECK(report.curve.empty());
    CHECK(report.epochs_run == 0);
    CHECK(report.best_epoch == 0);
    CHECK(report.test.accuracy >= 0.0);
}

TEST_CASE("training loss is non-increasing over the first five epochs") {
    // regression pin on the fixed smoke dataset, dropout off, lr 1e-3
    SynthConfig smoke;
    smoke.num_nodes = 80;
    smoke.num_classes = 2;
    smoke.num_edges = 50;
    smoke.edge_size = 3;
    smoke.p_intra = 0.9;
    smoke.feature_dim = 6;
    smoke.noise_sigma = 0.2;
    smoke.seed = 42;
    Dataset ds = gen_planted_partition(smoke);
    ds.splits = make_splits(ds.labels, 10, 20, 42);
    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse("attention");
    cfg.dropout = 0.0;
    cfg.learning_rate = 0.001;
    cfg.max_epochs = 5;
    cfg.seed = 42;
    const auto [params, report] = train(ds, cfg);
    REQUIRE(report.curve.size() == 5);
    for (std::size_t i = 1; i < 5; ++i)
        CHECK(report.curve[i].train_loss <= report.curve[i - 1].train_loss);
}

TEST_CASE("single-channel strategies expose only their own parameters") {
    const ModelParams le = zero_params({4, 8, 3}, FusionStrategy::parse("le-only"));
    std::vector<std::string> names;
    le.for_each_param([&](const char* name, const Matrix&, bool) { names.emplace_back(name); });
    CHECK(names == std::vector<std::string>{"le_channel.weight", "le_channel.bias",
                                            "classifier.weight", "classifier.bias"});

    // and their forward pass is the single channel feeding the classifier
    const Hypergraph hg = Hypergraph::make(4, {{0, 1, 2}, {1, 3}});
    const PipelineOperators ops = PipelineOperators::build(hg);
    Matrix x(4, 2);
    RandomStream stream(8, 0);
    for (double& v : x.data()) v = stream.uniform(-1.0, 1.0);
    RandomStream init_le(8, kStreamInit);
    const ModelParams ple = init_params({2, 4, 3}, FusionStrategy::parse("le-only"), init_le);
    const ForwardCache le_cache = forward_pass(ops, x, ple);
    CHECK(le_cache.z_out == le_cache.z_l);

    RandomStream init_hg(8, kStreamInit);
    const ModelParams phg = init_params({2, 4, 3}, FusionStrategy::parse("hg-only"), init_hg);
    const ForwardCache hg_cache = forward_pass(ops, x, phg);
    CHECK(hg_cache.z_out == hg_cache.hg.out);
}

TEST_CASE("divergence aborts with the epoch number") {
    const Dataset ds = quick_dataset(11, 5, 20);
    TrainConfig cfg;
    cfg.fusion = FusionStrategy::parse("attention");
    cfg.learning_rate = 1e160; // drives the logits past the double range
    cfg.max_epochs = 10;
    CHECK_THROWS_WITH_AS(train(ds, cfg), doctest::Contains("epoch"), NumericError);
}

TEST_CASE("checkpoints restore parameters bit-exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "adhcn_ckpt_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / "model.ckpt";

    for (const char* strategy : {"attention", "commconv", "fixed:0.25", "le-only"}) {
        TrainConfig cfg;
        cfg.fusion = FusionStrategy::parse(strategy);
        cfg.hidden = 6;
        cfg.seed = 31;
        RandomStream init(cfg.seed, kStreamInit);
        const ModelParams params = init_params({5, 6, 3}, cfg.fusion, init);
        save_checkpoint(params, cfg, path);
        TrainConfig loaded_cfg;
        const ModelParams loaded = load_checkpoint(path, &loaded_cfg);
        CAPTURE(strategy);
        CHECK(loaded == params);
        CHECK(loaded_cfg.fusion.to_string() == cfg.fusion.to_string());
        CHECK(loaded_cfg.hidden == cfg.hidden);
        CHECK(loaded_cfg.seed == cfg.seed);
    }

    std::ofstream(dir / "bad.ckpt") << "not-a-checkpoint\n";
    CHECK_THROWS_AS(load_checkpoint(dir / "bad.ckpt"), SchemaError);
}

TEST_CASE("train requires splits") {
    SynthConfig cfg;
    cfg.num_nodes = 24;
    cfg.num_classes = 2;
    cfg.num_edges = 12;
    cfg.edge_size = 3;
    cfg.feature_dim = 4;
    const Dataset ds = gen_planted_partition(cfg);
    TrainConfig tc;
    CHECK_THROWS_AS(train(ds, tc), std::invalid_argument);
}
