#include "adhcn/train.hpp"

#include "adhcn/errors.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace adhcn {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be positive");
    if (weight_decay < 0.0) throw std::invalid_argument("config: weight_decay must be nonnegative");
    if (dropout < 0.0 || dropout >= 1.0) throw std::invalid_argument("config: dropout must be in [0,1)");
    if (hidden < 1) throw std::invalid_argument("config: hidden must be positive");
    if (max_epochs < 0) throw std::invalid_argument("config: max_epochs must be nonnegative");
    if (patience < 1) throw std::invalid_argument("config: patience must be positive");
}

namespace {

SplitMetrics metrics_for(const LabelVector& labels, const std::vector<int>& preds,
                         std::span<const Index> mask) {
    if (mask.empty()) return {};
    return evaluate(confusion(labels, preds, mask));
}

} // namespace

std::pair<ModelParams, TrainReport> train(const Dataset& dataset, const TrainConfig& config) {
    config.validate();
    dataset.validate();
    if (!dataset.splits) throw std::invalid_argument("train: dataset has no splits");
    const SplitSpec& splits = *dataset.splits;

    const auto start = std::chrono::steady_clock::now();

    const PipelineOperators ops = PipelineOperators::build(dataset.hypergraph);
    RandomStream init_stream(config.seed, kStreamInit);
    const ModelDims dims{dataset.features.cols(), config.hidden,
                         static_cast<Index>(dataset.labels.num_classes)};
    ModelParams params = init_params(dims, config.fusion, init_stream);
    AdamState adam = AdamState::init(params);
    RandomStream hg_stream(config.seed, kStreamHgDropout);
    RandomStream le_stream(config.seed, kStreamLeDropout);

    // Validation falls back to the train split when no val indices exist.
    const std::span<const Index> val_mask =
        splits.val.empty() ? std::span<const Index>(splits.train) : std::span<const Index>(splits.val);

    const auto eval_model = [&](const ModelParams& p) { return forward_pass(ops, dataset.features, p); };

    // epoch 0 baseline: the initialized model
    double best_val_acc;
    double best_val_loss;
    {
        const ForwardCache cache = eval_model(params);
        const auto preds = predict(cache.probs);
        best_val_acc = metrics_for(dataset.labels, preds, val_mask).accuracy;
        best_val_loss = cross_entropy(cache.probs, dataset.labels, val_mask);
    }
    ModelParams best_params = params;
    Index best_epoch = 0;
    Index epochs_since_improvement = 0;

    TrainReport report;
    for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
        double train_acc = 0.0;
        double val_acc = 0.0;
        double val_loss = 0.0;
        GradientResult step;
        try {
            const DropoutSpec dropout{config.dropout, &hg_stream, &le_stream};
            step = compute_gradients(ops, dataset.features, dataset.labels, splits.train, params,
                                     config.weight_decay, dropout);
            adam_step(params, step.gradients, adam, config.learning_rate);

            const ForwardCache cache = eval_model(params);
            const auto preds = predict(cache.probs);
            train_acc = metrics_for(dataset.labels, preds, splits.train).accuracy;
            val_acc = metrics_for(dataset.labels, preds, val_mask).accuracy;
            val_loss = cross_entropy(cache.probs, dataset.labels, val_mask);
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ")");
        }
        report.curve.push_back({step.data_loss, train_acc, val_acc});

        const bool improved =
            val_acc > best_val_acc || (val_acc == best_val_acc && val_loss < best_val_loss);
        if (improved) {
            best_val_acc = val_acc;
            best_val_loss = val_loss;
            best_params = params;
            best_epoch = epoch;
            epochs_since_improvement = 0;
        } else if (++epochs_since_improvement >= config.patience) {
            break;
        }
    }

    report.epochs_run = static_cast<Index>(report.curve.size());
    report.best_epoch = best_epoch;

    const ForwardCache final_cache = eval_model(best_params);
    const auto preds = predict(final_cache.probs);
    report.train = metrics_for(dataset.labels, preds, splits.train);
    report.val = metrics_for(dataset.labels, preds, splits.val);
    report.test = metrics_for(dataset.labels, preds, splits.test);
    report.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(best_params), std::move(report)};
}

Matrix final_embeddings(const Dataset& dataset, const ModelParams& params) {
    const PipelineOperators ops = PipelineOperators::build(dataset.hypergraph);
    return forward_pass(ops, dataset.features, params).z_out;
}

} // namespace adhcn
