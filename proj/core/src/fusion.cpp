#include "adhcn/fusion.hpp"

#include "adhcn/text.hpp"

#include <cmath>
#include <stdexcept>

namespace adhcn {

FusionStrategy FusionStrategy::parse(const std::string& text) {
    FusionStrategy s;
    if (text == "attention") {
        s.kind = Kind::Attention;
    } else if (text == "attention-nocommon") {
        s.kind = Kind::AttentionNoCommon;
    } else if (text == "commconv") {
        s.kind = Kind::CommConv;
    } else if (text == "le-only") {
        s.kind = Kind::LeOnly;
    } else if (text == "hg-only") {
        s.kind = Kind::HgOnly;
    } else if (text.rfind("fixed:", 0) == 0) {
        s.kind = Kind::FixedAlpha;
        double alpha = 0.0;
        if (!parse_double(text.substr(6), alpha))
            throw std::invalid_argument("fusion strategy: cannot parse alpha in '" + text + "'");
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("fusion strategy: alpha must be in [0,1], got " +
                                        text.substr(6));
        s.alpha = alpha;
    } else {
        throw std::invalid_argument(
            "fusion strategy: unknown '" + text +
            "' (expected attention, attention-nocommon, commconv, fixed:<alpha>, le-only, hg-only)");
    }
    return s;
}

std::string FusionStrategy::to_string() const {
    switch (kind) {
        case Kind::Attention: return "attention";
        case Kind::AttentionNoCommon: return "attention-nocommon";
        case Kind::FixedAlpha: return "fixed:" + format_double(alpha);
        case Kind::CommConv: return "commconv";
        case Kind::LeOnly: return "le-only";
        case Kind::HgOnly: return "hg-only";
    }
    return "attention";
}

// Scores are the mean (not the sum) of query * tanh over hidden dims. The
// unnormalized dot product grows with the query norm until the channel
// softmax saturates at 0/1 and its gradient vanishes; the trained fusion
// then degenerates to a per-node channel pick.
static double score_scale(Index h) { return 1.0 / static_cast<double>(h); }

AttentionCache attention_forward(const std::vector<const Matrix*>& channels,
                                 const AttentionParams& params) {
    if (channels.empty()) throw std::invalid_argument("attention_forward: no channels");
    const Index n = channels.front()->rows();
    const Index h = channels.front()->cols();
    for (const Matrix* z : channels)
        if (z->rows() != n || z->cols() != h)
            throw std::invalid_argument("attention_forward: channel shapes disagree");
    if (params.proj_weight.rows() != h || params.proj_weight.cols() != h ||
        params.proj_bias.cols() != h || params.query.cols() != h)
        throw std::invalid_argument("attention_forward: parameter shapes disagree with channels");

    AttentionCache cache;
    const Index k = static_cast<Index>(channels.size());
    cache.scores = Matrix(n, k);
    cache.tanh_values.reserve(channels.size());
    for (Index t = 0; t < k; ++t) {
        Matrix pre = matmul_transpose_b(*channels[static_cast<std::size_t>(t)], params.proj_weight);
        add_row_vector(pre, params.proj_bias);
        Matrix th = tanh_elementwise(pre);
        for (Index i = 0; i < n; ++i) {
            double score = 0.0;
            const double* row = th.row(i);
            for (Index j = 0; j < h; ++j) score += row[j] * params.query(0, j);
            cache.scores(i, t) = score * score_scale(h);
        }
        cache.tanh_values.push_back(std::move(th));
    }
    cache.weights = cache.scores;
    softmax_rows(cache.weights);
    cache.fused = Matrix(n, h);
    for (Index t = 0; t < k; ++t) {
        const Matrix& z = *channels[static_cast<std::size_t>(t)];
        for (Index i = 0; i < n; ++i) {
            const double w = cache.weights(i, t);
            const double* zrow = z.row(i);
            double* frow = cache.fused.row(i);
            for (Index j = 0; j < h; ++j) frow[j] += w * zrow[j];
        }
    }
    return cache;
}

AttentionGrads attention_backward(const AttentionCache& cache,
                                  const std::vector<const Matrix*>& channels,
                                  const AttentionParams& params, const Matrix& d_fused) {
    const Index n = d_fused.rows();
    const Index h = d_fused.cols();
    const Index k = static_cast<Index>(channels.size());

    AttentionGrads grads;
    grads.d_params.proj_weight = Matrix(h, h);
    grads.d_params.proj_bias = Matrix(1, h);
    grads.d_params.query = Matrix(1, h);
    grads.d_channels.assign(channels.size(), Matrix(n, h));

    // fused = sum_t diag(w_t) Z_t
    Matrix d_scores(n, k);
    {
        Matrix d_weights(n, k);
        for (Index t = 0; t < k; ++t) {
            const Matrix& z = *channels[static_cast<std::size_t>(t)];
            Matrix& dz = grads.d_channels[static_cast<std::size_t>(t)];
            for (Index i = 0; i < n; ++i) {
                const double w = cache.weights(i, t);
                const double* drow = d_fused.row(i);
                const double* zrow = z.row(i);
                double* dzrow = dz.row(i);
                double acc = 0.0;
                for (Index j = 0; j < h; ++j) {
                    dzrow[j] += w * drow[j];
                    acc += drow[j] * zrow[j];
                }
                d_weights(i, t) = acc;
            }
        }
        // softmax backward per row
        for (Index i = 0; i < n; ++i) {
            double dot = 0.0;
            for (Index t = 0; t < k; ++t) dot += cache.weights(i, t) * d_weights(i, t);
            for (Index t = 0; t < k; ++t)
                d_scores(i, t) = cache.weights(i, t) * (d_weights(i, t) - dot);
        }
    }

    for (Index t = 0; t < k; ++t) {
        const Matrix& th = cache.tanh_values[static_cast<std::size_t>(t)];
        const Matrix& z = *channels[static_cast<std::size_t>(t)];
        // score_i = tanh_row_i . query
        Matrix d_pre(n, h);
        for (Index i = 0; i < n; ++i) {
            const double ds = d_scores(i, t) * score_scale(h);
            const double* trow = th.row(i);
            double* prow = d_pre.row(i);
            double* qgrad = grads.d_params.query.row(0);
            for (Index j = 0; j < h; ++j) {
                qgrad[j] += ds * trow[j];
                prow[j] = ds * params.query(0, j) * (1.0 - trow[j] * trow[j]);
            }
        }
        // pre = Z proj_weight^T + bias
        grads.d_params.proj_weight = add(grads.d_params.proj_weight, matmul_transpose_a(d_pre, z));
        grads.d_params.proj_bias = add(grads.d_params.proj_bias, column_sums(d_pre));
        grads.d_channels[static_cast<std::size_t>(t)] =
            add(grads.d_channels[static_cast<std::size_t>(t)], matmul(d_pre, params.proj_weight));
    }
    return grads;
}

FusionOutput attention_fuse(const Matrix& z_l, const Matrix& z_h, const AttentionParams& params,
                            bool include_common) {
    if (z_l.rows() != z_h.rows() || z_l.cols() != z_h.cols())
        throw std::invalid_argument("attention_fuse: channel shapes disagree");
    std::vector<const Matrix*> channels{&z_l, &z_h};
    Matrix z_c;
    if (include_common) {
        z_c = scale(add(z_l, z_h), 0.5);
        channels.push_back(&z_c);
    }
    AttentionCache cache = attention_forward(channels, params);
    return {std::move(cache.fused), std::move(cache.weights)};
}

FusionOutput fixed_alpha_fuse(const Matrix& z_l, const Matrix& z_h, double alpha) {
    if (z_l.rows() != z_h.rows() || z_l.cols() != z_h.cols())
        throw std::invalid_argument("fixed_alpha_fuse: channel shapes disagree");
    FusionOutput out;
    out.fused = add(z_h, scale(z_l, alpha));
    out.weights = Matrix(z_l.rows(), 2);
    for (Index i = 0; i < z_l.rows(); ++i) {
        out.weights(i, 0) = alpha;
        out.weights(i, 1) = 1.0;
    }
    return out;
}

FusionOutput commconv_fuse(const Matrix& z_l, const Matrix& z_h, const AttentionParams& att,
                           const CommConvParams& cc) {
    if (z_l.rows() != z_h.rows() || z_l.cols() != z_h.cols())
        throw std::invalid_argument("commconv_fuse: channel shapes disagree");
    Matrix z_c = matmul(scale(add(z_l, z_h), 0.5), cc.weight);
    add_row_vector(z_c, cc.bias);
    const std::vector<const Matrix*> channels{&z_l, &z_h, &z_c};
    AttentionCache cache = attention_forward(channels, att);
    return {std::move(cache.fused), std::move(cache.weights)};
}

} // namespace adhcn
