#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/data/dataset.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "mdfgan/gan/config.hpp"
#include "mdfgan/nn/adam.hpp"
#include "mdfgan/nn/dense_network.hpp"

namespace mdfgan::bench {

/// Plain regression network fitted to the HF samples alone.
struct HfOnlyModel {
    nn::DenseNetwork network;
    data::Normalizer input_norm;
    data::Normalizer output_norm;

    std::vector<data::Point> predict(std::span<const data::Point> inputs) const
    {
        std::vector<data::Point> out;
        out.reserve(inputs.size());
        for (auto const& x : inputs) out.push_back(output_norm.inverse_transform(network.evaluate(input_norm.transform(x))));
        return out;
    }
};

/// Same hidden architecture as the HF block, but fed x only. Trained with
/// Adam at lr_s for 3 * epochs_hf epochs, matching the number of supervised
/// steps the adversarial phase takes per epoch.
inline HfOnlyModel fit_hf_only(data::MultiFidelityDataset const& ds, gan::TrainingConfig const& config)
{
    config.validate();
    if (ds.hf.empty()) {
        throw InvalidArgument("fit_hf_only: no HF samples");
    }
    std::vector<std::size_t> sizes{ds.d1};
    sizes.insert(sizes.end(), config.architecture.hidden.begin(), config.architecture.hidden.end());
    sizes.push_back(ds.d2);

    HfOnlyModel m;
    m.network = nn::DenseNetwork::initialized(sizes, config.architecture.activations, nn::ActivationKind::identity(),
                                              derive_seed(config.seed, "init/hf-only"));
    const auto xs = ds.hf_inputs();
    const auto ys = ds.hf_outputs();
    m.input_norm = data::fit_normalizer(config.normalizer, xs);
    m.output_norm = data::fit_normalizer(config.normalizer, ys);
    std::vector<data::Sample> train;
    for (std::size_t i = 0; i < xs.size(); ++i) train.push_back({m.input_norm.transform(xs[i]), m.output_norm.transform(ys[i])});

    const std::size_t n = train.size();
    const std::size_t batch = std::min(config.hf_batch_cap, n);
    nn::AdamState state(m.network);
    Rng rng = make_rng(config.seed, "train/hf-only-batches");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> upstream(ds.d2);
    const std::size_t epochs = 3 * config.epochs_hf;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        shuffle(std::span(order), rng);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            const double inv_b = 1.0 / static_cast<double>(stop - start);
            auto grads = m.network.zero_gradients();
            double loss = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                auto const& s = train[order[k]];
                auto tape = m.network.forward(s.x);
                auto const out = tape.output();
                for (std::size_t i = 0; i < upstream.size(); ++i) {
                    upstream[i] = 2.0 * (out[i] - s.y[i]) * inv_b;
                    loss += (out[i] - s.y[i]) * (out[i] - s.y[i]);
                }
                m.network.accumulate_gradient(tape, upstream, grads);
            }
            if (!std::isfinite(loss)) {
                throw DivergenceError("HF-only training epoch", epoch + 1, "mean squared error");
            }
            nn::adam_step(m.network, grads, state, config.lr_s);
        }
    }
    return m;
}

} // namespace mdfgan::bench
