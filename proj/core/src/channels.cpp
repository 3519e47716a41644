#include "adhcn/channels.hpp"

#include <stdexcept>

namespace adhcn {

ChannelCache channel_forward_cached(const SparseMatrix& op, const Matrix& x,
                                    const ChannelParams& params) {
    if (op.cols() != x.rows())
        throw std::invalid_argument("channel forward: operator/input row mismatch");
    if (x.cols() != params.weight.rows())
        throw std::invalid_argument("channel forward: input/weight dimension mismatch");
    ChannelCache cache;
    cache.aggregated = spmm(op, x);
    cache.pre = matmul(cache.aggregated, params.weight);
    add_row_vector(cache.pre, params.bias);
    cache.out = relu(cache.pre);
    return cache;
}

Matrix hypergraph_channel_forward(const SparseMatrix& op, const Matrix& x_h,
                                  const ChannelParams& params) {
    return channel_forward_cached(op, x_h, params).out;
}

Matrix le_channel_forward(const SparseMatrix& op, const Matrix& x_l,
                          const ChannelParams& params) {
    return channel_forward_cached(op, x_l, params).out;
}

Matrix le_back_project(const SparseMatrix& back_projection, const Matrix& z_pair) {
    if (back_projection.cols() != z_pair.rows())
        throw std::invalid_argument("le_back_project: projection/input shape mismatch");
    return spmm(back_projection, z_pair);
}

Matrix dropout_mask(Index rows, Index cols, double rate, RandomStream& stream) {
    if (rate < 0.0 || rate >= 1.0)
        throw std::invalid_argument("dropout_mask: rate must be in [0,1)");
    Matrix mask(rows, cols, 1.0);
    if (rate == 0.0) return mask;
    const double kept = 1.0 / (1.0 - rate);
    for (double& v : mask.data()) v = stream.uniform() < rate ? 0.0 : kept;
    return mask;
}

} // namespace adhcn
