#include "adhcn/model.hpp"

#include "adhcn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adhcn {

namespace {

void ensure_finite(const Matrix& m, const char* tensor) {
    if (!m.all_finite())
        throw NumericError(std::string("non-finite values in tensor ") + tensor);
}

void glorot_fill(Matrix& m, Index fan_in, Index fan_out, RandomStream& stream) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.data()) v = stream.uniform(-limit, limit);
}

} // namespace

ModelParams zero_params(const ModelDims& dims, const FusionStrategy& strategy) {
    if (dims.num_features < 1 || dims.hidden < 1 || dims.num_classes < 2)
        throw std::invalid_argument("model: dimensions must satisfy d>=1, h>=1, c>=2");
    ModelParams p;
    p.strategy = strategy;
    if (strategy.uses_hg_channel())
        p.hg_channel = {Matrix(dims.num_features, dims.hidden), Matrix(1, dims.hidden)};
    if (strategy.uses_le_channel())
        p.le_channel = {Matrix(dims.num_features, dims.hidden), Matrix(1, dims.hidden)};
    if (strategy.uses_attention())
        p.attention = {Matrix(dims.hidden, dims.hidden), Matrix(1, dims.hidden),
                       Matrix(1, dims.hidden)};
    if (strategy.uses_commconv())
        p.commconv = {Matrix(dims.hidden, dims.hidden), Matrix(1, dims.hidden)};
    p.classifier_weight = Matrix(dims.hidden, dims.num_classes);
    p.classifier_bias = Matrix(1, dims.num_classes);
    return p;
}

ModelParams init_params(const ModelDims& dims, const FusionStrategy& strategy,
                        RandomStream& stream) {
    ModelParams p = zero_params(dims, strategy);
    p.for_each_param([&](const char* name, Matrix& m, bool is_weight) {
        if (!is_weight) return; // biases stay zero
        if (std::string_view(name) == "attention.query")
            glorot_fill(m, m.cols(), 1, stream); // treated as h x 1
        else
            glorot_fill(m, m.rows(), m.cols(), stream);
    });
    return p;
}

PipelineOperators PipelineOperators::build(const Hypergraph& hg) {
    PipelineOperators ops;
    ops.hg_op = hyper_norm_operator(hg);
    const LEGraph le = line_expand(hg);
    ops.le_op = le_norm_operator(le);
    ops.proj = projection_matrix(hg, le);
    ops.back_proj = back_projection_matrix(hg, le);
    ops.back_proj_t = ops.back_proj.transpose();
    return ops;
}

ForwardCache forward_pass(const PipelineOperators& ops, const Matrix& x_h,
                          const ModelParams& params, const DropoutSpec& dropout) {
    const FusionStrategy& strat = params.strategy;
    const bool training = dropout.rate > 0.0 && dropout.hg_stream && dropout.le_stream;
    ForwardCache cache;

    if (strat.uses_hg_channel()) {
        cache.xh_in = training
                          ? hadamard(x_h, dropout_mask(x_h.rows(), x_h.cols(), dropout.rate,
                                                       *dropout.hg_stream))
                          : x_h;
        cache.hg = channel_forward_cached(ops.hg_op, cache.xh_in, params.hg_channel);
        ensure_finite(cache.hg.out, "Z_h");
    }
    if (strat.uses_le_channel()) {
        Matrix x_l = spmm(ops.proj, x_h);
        if (training)
            x_l = hadamard(x_l, dropout_mask(x_l.rows(), x_l.cols(), dropout.rate,
                                             *dropout.le_stream));
        cache.xl_in = std::move(x_l);
        cache.le = channel_forward_cached(ops.le_op, cache.xl_in, params.le_channel);
        cache.z_l = le_back_project(ops.back_proj, cache.le.out);
        ensure_finite(cache.z_l, "Z_l");
    }

    switch (strat.kind) {
        case FusionStrategy::Kind::Attention:
        case FusionStrategy::Kind::AttentionNoCommon: {
            std::vector<const Matrix*> channels{&cache.z_l, &cache.hg.out};
            if (strat.kind == FusionStrategy::Kind::Attention) {
                cache.z_c = scale(add(cache.z_l, cache.hg.out), 0.5);
                channels.push_back(&cache.z_c);
            }
            cache.att = attention_forward(channels, params.attention);
            cache.fusion_weights = cache.att.weights;
            cache.z_out = cache.att.fused;
            break;
        }
        case FusionStrategy::Kind::CommConv: {
            cache.z_c = matmul(scale(add(cache.z_l, cache.hg.out), 0.5), params.commconv.weight);
            add_row_vector(cache.z_c, params.commconv.bias);
            const std::vector<const Matrix*> channels{&cache.z_l, &cache.hg.out, &cache.z_c};
            cache.att = attention_forward(channels, params.attention);
            cache.fusion_weights = cache.att.weights;
            cache.z_out = cache.att.fused;
            break;
        }
        case FusionStrategy::Kind::FixedAlpha: {
            FusionOutput fused = fixed_alpha_fuse(cache.z_l, cache.hg.out, strat.alpha);
            cache.fusion_weights = std::move(fused.weights);
            cache.z_out = std::move(fused.fused);
            break;
        }
        case FusionStrategy::Kind::LeOnly:
            cache.z_out = cache.z_l;
            cache.fusion_weights = Matrix(cache.z_l.rows(), 1, 1.0);
            break;
        case FusionStrategy::Kind::HgOnly:
            cache.z_out = cache.hg.out;
            cache.fusion_weights = Matrix(cache.hg.out.rows(), 1, 1.0);
            break;
    }
    ensure_finite(cache.z_out, "Z_out");

    cache.logits = matmul(cache.z_out, params.classifier_weight);
    add_row_vector(cache.logits, params.classifier_bias);
    cache.probs = cache.logits;
    softmax_rows(cache.probs);
    ensure_finite(cache.probs, "probs");
    return cache;
}

Matrix classify(const Matrix& z_out, const Matrix& weight, const Matrix& bias) {
    Matrix logits = matmul(z_out, weight);
    add_row_vector(logits, bias);
    softmax_rows(logits);
    return logits;
}

std::vector<int> predict(const Matrix& probs) {
    std::vector<int> labels(static_cast<std::size_t>(probs.rows()));
    for (Index i = 0; i < probs.rows(); ++i) {
        int best = 0;
        const double* row = probs.row(i);
        for (Index c = 1; c < probs.cols(); ++c)
            if (row[c] > row[best]) best = static_cast<int>(c);
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

double cross_entropy(const Matrix& probs, const LabelVector& labels, std::span<const Index> mask) {
    if (mask.empty()) throw std::invalid_argument("cross_entropy: empty mask");
    if (probs.rows() != labels.size() || probs.cols() != labels.num_classes)
        throw std::invalid_argument("cross_entropy: probs shape disagrees with labels");
    double sum = 0.0;
    for (Index i : mask) {
        if (i < 0 || i >= probs.rows())
            throw std::invalid_argument("cross_entropy: mask index out of range");
        const double p = std::max(probs(i, labels.values[static_cast<std::size_t>(i)]), 1e-12);
        sum -= std::log(p);
    }
    return sum / static_cast<double>(mask.size());
}

double weight_decay_penalty(const ModelParams& params, double weight_decay) {
    if (weight_decay == 0.0) return 0.0;
    double sq = 0.0;
    params.for_each_param([&](const char*, const Matrix& m, bool is_weight) {
        if (!is_weight) return;
        for (double v : m.data()) sq += v * v;
    });
    return 0.5 * weight_decay * sq;
}

double evaluate_loss(const PipelineOperators& ops, const Matrix& x_h, const LabelVector& labels,
                     std::span<const Index> mask, const ModelParams& params, double weight_decay) {
    const ForwardCache cache = forward_pass(ops, x_h, params);
    return cross_entropy(cache.probs, labels, mask) + weight_decay_penalty(params, weight_decay);
}

GradientResult compute_gradients(const PipelineOperators& ops, const Matrix& x_h,
                                 const LabelVector& labels, std::span<const Index> mask,
                                 const ModelParams& params, double weight_decay,
                                 const DropoutSpec& dropout) {
    const FusionStrategy& strat = params.strategy;
    const ForwardCache cache = forward_pass(ops, x_h, params, dropout);

    GradientResult result;
    result.data_loss = cross_entropy(cache.probs, labels, mask);
    result.total_loss = result.data_loss + weight_decay_penalty(params, weight_decay);
    if (!std::isfinite(result.total_loss)) throw NumericError("non-finite loss");

    const Index n = cache.probs.rows();
    const Index c = cache.probs.cols();
    ModelParams& grads = result.gradients;
    grads = zero_params({x_h.cols(), cache.z_out.cols(), c}, strat);

    // softmax cross-entropy: dlogits = (probs - onehot)/|mask| on masked rows
    Matrix d_logits(n, c);
    const double inv_mask = 1.0 / static_cast<double>(mask.size());
    for (Index i : mask) {
        const int y = labels.values[static_cast<std::size_t>(i)];
        for (Index j = 0; j < c; ++j)
            d_logits(i, j) = (cache.probs(i, j) - (j == y ? 1.0 : 0.0)) * inv_mask;
    }
    grads.classifier_weight = matmul_transpose_a(cache.z_out, d_logits);
    grads.classifier_bias = column_sums(d_logits);
    const Matrix d_z_out = matmul_transpose_b(d_logits, params.classifier_weight);

    Matrix d_z_l, d_z_h;
    switch (strat.kind) {
        case FusionStrategy::Kind::Attention:
        case FusionStrategy::Kind::AttentionNoCommon:
        case FusionStrategy::Kind::CommConv: {
            std::vector<const Matrix*> channels{&cache.z_l, &cache.hg.out};
            const bool has_common = strat.kind != FusionStrategy::Kind::AttentionNoCommon;
            if (has_common) channels.push_back(&cache.z_c);
            AttentionGrads ag = attention_backward(cache.att, channels, params.attention, d_z_out);
            grads.attention = std::move(ag.d_params);
            d_z_l = std::move(ag.d_channels[0]);
            d_z_h = std::move(ag.d_channels[1]);
            if (strat.kind == FusionStrategy::Kind::Attention) {
                // Z_c = (Z_l + Z_h)/2
                d_z_l = add(d_z_l, scale(ag.d_channels[2], 0.5));
                d_z_h = add(d_z_h, scale(ag.d_channels[2], 0.5));
            } else if (strat.kind == FusionStrategy::Kind::CommConv) {
                // Z_c = ((Z_l + Z_h)/2) W_c + b_c
                const Matrix& d_z_c = ag.d_channels[2];
                const Matrix mean_in = scale(add(cache.z_l, cache.hg.out), 0.5);
                grads.commconv.weight = matmul_transpose_a(mean_in, d_z_c);
                grads.commconv.bias = column_sums(d_z_c);
                const Matrix back = scale(matmul_transpose_b(d_z_c, params.commconv.weight), 0.5);
                d_z_l = add(d_z_l, back);
                d_z_h = add(d_z_h, back);
            }
            break;
        }
        case FusionStrategy::Kind::FixedAlpha:
            d_z_h = d_z_out;
            d_z_l = scale(d_z_out, strat.alpha);
            break;
        case FusionStrategy::Kind::LeOnly:
            d_z_l = d_z_out;
            break;
        case FusionStrategy::Kind::HgOnly:
            d_z_h = d_z_out;
            break;
    }

    if (strat.uses_hg_channel()) {
        Matrix d_pre = d_z_h;
        for (std::size_t i = 0; i < d_pre.data().size(); ++i)
            if (cache.hg.pre.data()[i] <= 0.0) d_pre.data()[i] = 0.0;
        grads.hg_channel.weight = matmul_transpose_a(cache.hg.aggregated, d_pre);
        grads.hg_channel.bias = column_sums(d_pre);
    }
    if (strat.uses_le_channel()) {
        // Z_l = P'_v Z~_l
        Matrix d_pre = spmm(ops.back_proj_t, d_z_l);
        for (std::size_t i = 0; i < d_pre.data().size(); ++i)
            if (cache.le.pre.data()[i] <= 0.0) d_pre.data()[i] = 0.0;
        grads.le_channel.weight = matmul_transpose_a(cache.le.aggregated, d_pre);
        grads.le_channel.bias = column_sums(d_pre);
    }

    if (weight_decay != 0.0) {
        // zip the two visitors: parameter order is identical by construction
        std::vector<const Matrix*> weights;
        params.for_each_param([&](const char*, const Matrix& m, bool is_weight) {
            if (is_weight) weights.push_back(&m);
        });
        std::size_t idx = 0;
        grads.for_each_param([&](const char*, Matrix& g, bool is_weight) {
            if (!is_weight) return;
            const Matrix& w = *weights[idx++];
            for (std::size_t i = 0; i < g.data().size(); ++i)
                g.data()[i] += weight_decay * w.data()[i];
        });
    }
    return result;
}

} // namespace adhcn
