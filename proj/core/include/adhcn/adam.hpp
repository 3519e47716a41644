#pragma once

#include "adhcn/model.hpp"

#include <cstdint>
#include <vector>

namespace adhcn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// First/second moment accumulators, one matrix per parameter in visitor order.
struct AdamState {
    std::vector<Matrix> first_moment;
    std::vector<Matrix> second_moment;
    std::int64_t step = 0;

    static AdamState init(const ModelParams& params);
};

// Standard bias-corrected Adam update, in place.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& config = {});

} // namespace adhcn
