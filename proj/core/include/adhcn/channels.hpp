#pragma once

#include "adhcn/dense.hpp"
#include "adhcn/rng.hpp"
#include "adhcn/sparse.hpp"

namespace adhcn {

// Learnable parameters of one convolution channel: Z = ReLU(op X weight + bias).
struct ChannelParams {
    Matrix weight; // d_in x h
    Matrix bias;   // 1 x h

    bool operator==(const ChannelParams&) const = default;
};

// Intermediates kept for the backward pass.
struct ChannelCache {
    Matrix aggregated; // op * X
    Matrix pre;        // aggregated * weight + bias
    Matrix out;        // ReLU(pre)
};

ChannelCache channel_forward_cached(const SparseMatrix& op, const Matrix& x,
                                    const ChannelParams& params);

// Hypergraph convolution channel: op comes from hyper_norm_operator.
Matrix hypergraph_channel_forward(const SparseMatrix& op, const Matrix& x_h,
                                  const ChannelParams& params);

// Line-expansion convolution channel: op comes from le_norm_operator and
// x_l = P_v * x_h lives in pair space.
Matrix le_channel_forward(const SparseMatrix& op, const Matrix& x_l,
                          const ChannelParams& params);

// Z_l = P'_v * Z~_l: inverse-degree weighted average of pair rows per node.
Matrix le_back_project(const SparseMatrix& back_projection, const Matrix& z_pair);

// Inverted-scaling dropout mask: entries are 0 with probability rate, else
// 1/(1-rate). rate 0 returns all ones without consuming the stream.
Matrix dropout_mask(Index rows, Index cols, double rate, RandomStream& stream);

} // namespace adhcn
