#pragma once

#include "adhcn/channels.hpp"
#include "adhcn/dense.hpp"
#include "adhcn/fusion.hpp"
#include "adhcn/hypergraph.hpp"
#include "adhcn/line_expansion.hpp"
#include "adhcn/rng.hpp"

#include <span>
#include <string>
#include <vector>

namespace adhcn {

struct ModelDims {
    Index num_features = 0;
    Index hidden = 64;
    Index num_classes = 0;
};

// All learnable parameters. Which blocks are allocated depends on the fusion
// strategy; the visitor below yields exactly the active ones in a fixed order
// (the order also fixes initialization draws and checkpoint layout).
struct ModelParams {
    FusionStrategy strategy;
    ChannelParams hg_channel;
    ChannelParams le_channel;
    AttentionParams attention;
    CommConvParams commconv;
    Matrix classifier_weight; // h x c
    Matrix classifier_bias;   // 1 x c

    template <class Fn>
    void for_each_param(Fn&& fn) {
        visit(*this, fn);
    }
    template <class Fn>
    void for_each_param(Fn&& fn) const {
        visit(*this, fn);
    }

    bool operator==(const ModelParams&) const = default;

private:
    template <class Self, class Fn>
    static void visit(Self& self, Fn& fn) {
        if (self.strategy.uses_hg_channel()) {
            fn("hg_channel.weight", self.hg_channel.weight, true);
            fn("hg_channel.bias", self.hg_channel.bias, false);
        }
        if (self.strategy.uses_le_channel()) {
            fn("le_channel.weight", self.le_channel.weight, true);
            fn("le_channel.bias", self.le_channel.bias, false);
        }
        if (self.strategy.uses_attention()) {
            fn("attention.proj_weight", self.attention.proj_weight, true);
            fn("attention.proj_bias", self.attention.proj_bias, false);
            fn("attention.query", self.attention.query, true);
        }
        if (self.strategy.uses_commconv()) {
            fn("commconv.weight", self.commconv.weight, true);
            fn("commconv.bias", self.commconv.bias, false);
        }
        fn("classifier.weight", self.classifier_weight, true);
        fn("classifier.bias", self.classifier_bias, false);
    }
};

// Zero-filled parameter set of the right shapes for the strategy.
ModelParams zero_params(const ModelDims& dims, const FusionStrategy& strategy);

// Glorot-uniform weights, zero biases; the query is treated as h x 1 for its
// fan computation. Draw order follows the parameter visitor.
ModelParams init_params(const ModelDims& dims, const FusionStrategy& strategy,
                        RandomStream& stream);

// Fixed sparse operators of the pipeline, built once per dataset.
struct PipelineOperators {
    SparseMatrix hg_op;       // n x n normalized hypergraph operator
    SparseMatrix le_op;       // P x P normalized LE operator
    SparseMatrix proj;        // P_v
    SparseMatrix back_proj;   // P'_v
    SparseMatrix back_proj_t; // P'_v^T, used by the backward pass

    static PipelineOperators build(const Hypergraph& hg);
};

// Everything the backward pass needs from one forward evaluation.
struct ForwardCache {
    Matrix xh_in, xl_in; // channel inputs after dropout (raw in eval mode)
    ChannelCache hg;
    ChannelCache le;
    Matrix z_l; // back-projected LE output, n x h
    Matrix z_c;
    AttentionCache att;
    Matrix fusion_weights;
    Matrix z_out;
    Matrix logits;
    Matrix probs;
};

// Training mode when streams are non-null and rate > 0; eval mode otherwise.
struct DropoutSpec {
    double rate = 0.0;
    RandomStream* hg_stream = nullptr;
    RandomStream* le_stream = nullptr;
};

ForwardCache forward_pass(const PipelineOperators& ops, const Matrix& x_h,
                          const ModelParams& params, const DropoutSpec& dropout = {});

// probs = row softmax(z_out W + b)
Matrix classify(const Matrix& z_out, const Matrix& weight, const Matrix& bias);

// argmax per row; ties resolved to the lowest class index
std::vector<int> predict(const Matrix& probs);

// mean negative log-likelihood over the mask; probabilities clamped at 1e-12
double cross_entropy(const Matrix& probs, const LabelVector& labels, std::span<const Index> mask);

// 0.5 * wd * sum of squared entries over weight matrices (biases exempt)
double weight_decay_penalty(const ModelParams& params, double weight_decay);

struct GradientResult {
    double total_loss = 0.0; // data_loss + decay penalty
    double data_loss = 0.0;  // masked cross entropy
    ModelParams gradients;
};

// Exact reverse-mode gradients of the full pipeline loss for one fixed
// forward computation (fixed dropout masks). ReLU subgradient at 0 is 0.
GradientResult compute_gradients(const PipelineOperators& ops, const Matrix& x_h,
                                 const LabelVector& labels, std::span<const Index> mask,
                                 const ModelParams& params, double weight_decay,
                                 const DropoutSpec& dropout = {});

// Forward-only loss (same code path as compute_gradients), used by the
// finite-difference oracle.
double evaluate_loss(const PipelineOperators& ops, const Matrix& x_h, const LabelVector& labels,
                     std::span<const Index> mask, const ModelParams& params, double weight_decay);

} // namespace adhcn
