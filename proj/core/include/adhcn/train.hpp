#pragma once

#include "adhcn/adam.hpp"
#include "adhcn/dataset.hpp"
#include "adhcn/metrics.hpp"
#include "adhcn/model.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace adhcn {

struct TrainConfig {
    double learning_rate = 0.001;
    double weight_decay = 0.0005;
    double dropout = 0.5;
    Index hidden = 64;
    Index max_epochs = 200;
    Index patience = 50;
    std::uint64_t seed = 42;
    FusionStrategy fusion;

    void validate() const; // throws std::invalid_argument
};

struct EpochStats {
    double train_loss = 0.0; // masked cross entropy of the training-mode forward
    double train_acc = 0.0;
    double val_acc = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> curve; // one entry per epoch run
    Index epochs_run = 0;
    Index best_epoch = 0; // 1-based; 0 means the initialized model
    SplitMetrics train;
    SplitMetrics val;
    SplitMetrics test;
    double wall_clock_sec = 0.0;
};

// Full-batch transductive training: per epoch run both channels, fuse,
// classify, take the masked loss on the train split, backpropagate and apply
// one Adam step. Tracks the best validation accuracy (ties broken by lower
// validation loss) and returns the parameters of the best epoch. Stops early
// after `patience` epochs without improvement. Deterministic given the seed.
std::pair<ModelParams, TrainReport> train(const Dataset& dataset, const TrainConfig& config);

// Z_out of the model in eval mode (used for the embeddings export).
Matrix final_embeddings(const Dataset& dataset, const ModelParams& params);

} // namespace adhcn
