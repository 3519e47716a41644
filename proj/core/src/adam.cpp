#include "adhcn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace adhcn {

AdamState AdamState::init(const ModelParams& params) {
    AdamState state;
    params.for_each_param([&](const char*, const Matrix& m, bool) {
        state.first_moment.emplace_back(m.rows(), m.cols());
        state.second_moment.emplace_back(m.rows(), m.cols());
    });
    return state;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& config) {
    std::vector<const Matrix*> grad_list;
    grads.for_each_param([&](const char*, const Matrix& g, bool) { grad_list.push_back(&g); });

    state.step += 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

    std::size_t idx = 0;
    params.for_each_param([&](const char* name, Matrix& p, bool) {
        if (idx >= grad_list.size() || idx >= state.first_moment.size())
            throw std::invalid_argument("adam_step: parameter/gradient lists disagree");
        const Matrix& g = *grad_list[idx];
        Matrix& m = state.first_moment[idx];
        Matrix& v = state.second_moment[idx];
        if (g.rows() != p.rows() || g.cols() != p.cols())
            throw std::invalid_argument(std::string("adam_step: shape mismatch for ") + name);
        for (std::size_t i = 0; i < p.data().size(); ++i) {
            const double gi = g.data()[i];
            m.data()[i] = config.beta1 * m.data()[i] + (1.0 - config.beta1) * gi;
            v.data()[i] = config.beta2 * v.data()[i] + (1.0 - config.beta2) * gi * gi;
            const double m_hat = m.data()[i] / bc1;
            const double v_hat = v.data()[i] / bc2;
            p.data()[i] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
        ++idx;
    });
}

} // namespace adhcn
