#pragma once

#include "adhcn/dense.hpp"

#include <string>
#include <vector>

namespace adhcn {

// Shared per-node attention scorer: the score of a channel row z is the mean
// over hidden dimensions of query ⊙ tanh(proj_weight z + proj_bias), and the
// per-node channel weights are the softmax of the stacked scores.
struct AttentionParams {
    Matrix proj_weight; // h x h
    Matrix proj_bias;   // 1 x h
    Matrix query;       // 1 x h

    bool operator==(const AttentionParams&) const = default;
};

// Common-channel affine map commConv(x) = x W_c + b_c (row-wise).
struct CommConvParams {
    Matrix weight; // h x h
    Matrix bias;   // 1 x h

    bool operator==(const CommConvParams&) const = default;
};

struct FusionOutput {
    Matrix fused;   // n x h
    Matrix weights; // n x k, channel order [Z_l, Z_h, Z_c]
};

// How the two channel outputs are combined into Z_out.
struct FusionStrategy {
    enum class Kind { Attention, AttentionNoCommon, FixedAlpha, CommConv, LeOnly, HgOnly };

    Kind kind = Kind::Attention;
    double alpha = 0.5; // FixedAlpha only

    // Accepts: attention, attention-nocommon, commconv, fixed:<alpha in [0,1]>,
    // le-only, hg-only. Throws std::invalid_argument otherwise.
    static FusionStrategy parse(const std::string& text);
    std::string to_string() const;

    bool uses_attention() const {
        return kind == Kind::Attention || kind == Kind::AttentionNoCommon || kind == Kind::CommConv;
    }
    bool uses_commconv() const { return kind == Kind::CommConv; }
    bool uses_le_channel() const { return kind != Kind::HgOnly; }
    bool uses_hg_channel() const { return kind != Kind::LeOnly; }

    bool operator==(const FusionStrategy&) const = default;
};

// Intermediates of the attention scorer, kept for the backward pass.
struct AttentionCache {
    std::vector<Matrix> tanh_values; // per channel, n x h
    Matrix scores;                   // n x k
    Matrix weights;                  // n x k (row softmax of scores)
    Matrix fused;                    // n x h
};

AttentionCache attention_forward(const std::vector<const Matrix*>& channels,
                                 const AttentionParams& params);

struct AttentionGrads {
    std::vector<Matrix> d_channels;
    AttentionParams d_params;
};

AttentionGrads attention_backward(const AttentionCache& cache,
                                  const std::vector<const Matrix*>& channels,
                                  const AttentionParams& params, const Matrix& d_fused);

// Attention fusion over [Z_l, Z_h] plus the averaged common channel
// Z_c = (Z_l + Z_h)/2 when include_common is set.
FusionOutput attention_fuse(const Matrix& z_l, const Matrix& z_h, const AttentionParams& params,
                            bool include_common = true);

// Z_out = Z_h + alpha * Z_l; reported weights are the constant rows (alpha, 1).
FusionOutput fixed_alpha_fuse(const Matrix& z_l, const Matrix& z_h, double alpha);

// Attention fusion with Z_c = (commConv(Z_h) + commConv(Z_l)) / 2.
FusionOutput commconv_fuse(const Matrix& z_l, const Matrix& z_h, const AttentionParams& att,
                           const CommConvParams& cc);

} // namespace adhcn
