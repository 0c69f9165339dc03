#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/nn/dense_network.hpp"

namespace mdfgan::nn {

/// Moment accumulators for one parameter set, laid out like
/// DenseNetwork::parameter_blocks().
struct AdamState {
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
    std::uint64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState() = default;

    explicit AdamState(DenseNetwork const& net)
    {
        for (auto block : net.parameter_blocks()) {
            first_moment.emplace_back(block.size(), 0.0);
            second_moment.emplace_back(block.size(), 0.0);
        }
    }
};

/// One bias-corrected Adam update of `params` from `grads`.
///
/// Every gradient is checked before anything is written, so a non-finite entry
/// leaves parameters and state untouched.
inline void adam_step(std::span<const std::span<double>> params, std::span<const std::span<const double>> grads,
                      AdamState& state, double lr)
{
    if (!(lr >= 0.0) || !std::isfinite(lr)) {
        throw InvalidArgument("adam_step: learning rate must be finite and non-negative");
    }
    if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
        throw ShapeError("adam_step: parameter, gradient and state block counts differ");
    }
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size() != grads[b].size() || params[b].size() != state.first_moment[b].size()) {
            throw ShapeError("adam_step: size mismatch in " + block_name(b));
        }
        for (double g : grads[b]) {
            if (!std::isfinite(g)) {
                throw InvalidArgument("adam_step: non-finite gradient in " + block_name(b));
            }
        }
    }

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& m = state.first_moment[b];
        auto& v = state.second_moment[b];
        for (std::size_t i = 0; i < params[b].size(); ++i) {
            const double g = grads[b][i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            params[b][i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

/// Network overload; throws ContractViolation when `net` is frozen.
inline void adam_step(DenseNetwork& net, Gradients const& grads, AdamState& state, double lr)
{
    if (net.frozen()) {
        throw ContractViolation("adam_step: network is frozen");
    }
    auto g = grads.blocks();
    auto p = net.parameter_blocks_mut();
    adam_step(p, g, state, lr);
}

} // namespace mdfgan::nn
