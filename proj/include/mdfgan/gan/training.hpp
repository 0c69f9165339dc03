#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/data/dataset.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "mdfgan/gan/config.hpp"
#include "mdfgan/gan/model.hpp"
#include "mdfgan/nn/adam.hpp"

namespace mdfgan::gan {

using data::Point;
using data::Sample;

/// Losses observed in one adversarial iteration, each taken on the current
/// mini-batch just before the stage that minimises it.
struct LossRecord {
    std::size_t iteration = 0;
    double supervised = 0.0;
    double generative = 0.0;
    double discriminative = 0.0;

    friend bool operator==(LossRecord const&, LossRecord const&) = default;
};

struct GeneratorGradient {
    double loss = 0.0;
    nn::Gradients hf_block;
};

struct AdversarialGradient {
    double loss = 0.0;
    nn::Gradients hf_block;
    nn::Gradients discriminator;
};

namespace detail {

template <typename T>
void require_batch(std::span<const T> batch, char const* what)
{
    if (batch.empty()) {
        throw InvalidArgument(std::string(what) + ": empty batch");
    }
}

inline void require_width(std::span<const double> v, std::size_t width, char const* what)
{
    if (v.size() != width) {
        throw ShapeError(std::string(what) + ": expected width " + std::to_string(width) + ", got " +
                         std::to_string(v.size()));
    }
}

struct GeneratorPass {
    nn::ForwardTape tape;
};

inline GeneratorPass generator_pass(GanMdfModel const& model, std::span<const double> x)
{
    return {model.hf_block.forward(model.hf_input(x))};
}

inline double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

} // namespace detail

/// Mean over the batch of ||G[x] - y||^2.
inline double supervised_loss(GanMdfModel const& model, std::span<const Sample> batch)
{
    detail::require_batch(batch, "supervised_loss");
    double sum = 0.0;
    for (auto const& s : batch) {
        detail::require_width(s.y, model.d2(), "supervised_loss");
        sum += detail::squared_distance(model.generator_forward(s.x), s.y);
    }
    return sum / static_cast<double>(batch.size());
}

/// Mean over the batch of 1 - D[G[x]].
inline double generative_loss(GanMdfModel const& model, std::span<const Point> inputs)
{
    detail::require_batch(inputs, "generative_loss");
    double sum = 0.0;
    for (auto const& x : inputs) sum += 1.0 - model.discriminator.evaluate(model.generator_forward(x))[0];
    return sum / static_cast<double>(inputs.size());
}

/// Mean of 1 - D[y] over the batch plus mean of D[G[x]] over the batch.
inline double discriminative_loss(GanMdfModel const& model, std::span<const Sample> batch)
{
    detail::require_batch(batch, "discriminative_loss");
    double real = 0.0;
    double fake = 0.0;
    for (auto const& s : batch) {
        detail::require_width(s.y, model.d2(), "discriminative_loss");
        real += 1.0 - model.discriminator.evaluate(s.y)[0];
        fake += model.discriminator.evaluate(model.generator_forward(s.x))[0];
    }
    const double n = static_cast<double>(batch.size());
    return real / n + fake / n;
}

/// Supervised loss and its gradient with respect to the HF block.
inline GeneratorGradient supervised_gradient(GanMdfModel const& model, std::span<const Sample> batch)
{
    detail::require_batch(batch, "supervised_gradient");
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    GeneratorGradient out{0.0, model.hf_block.zero_gradients()};
    std::vector<double> upstream(model.d2());
    for (auto const& s : batch) {
        detail::require_width(s.y, model.d2(), "supervised_gradient");
        auto pass = detail::generator_pass(model, s.x);
        auto const y_hat = pass.tape.output();
        for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] = 2.0 * (y_hat[i] - s.y[i]) * inv_n;
        out.loss += detail::squared_distance(y_hat, s.y);
        model.hf_block.accumulate_gradient(pass.tape, upstream, out.hf_block);
    }
    out.loss *= inv_n;
    return out;
}

/// Discriminative loss and its gradients with respect to both the HF block
/// (through the fake branch) and the discriminator.
inline AdversarialGradient discriminative_gradient(GanMdfModel const& model, std::span<const Sample> batch)
{
    detail::require_batch(batch, "discriminative_gradient");
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    auto const& disc = model.discriminator;
    AdversarialGradient out{0.0, model.hf_block.zero_gradients(), disc.zero_gradients()};
    const std::vector<double> real_upstream{-inv_n};
    const std::vector<double> fake_upstream{inv_n};
    for (auto const& s : batch) {
        detail::require_width(s.y, model.d2(), "discriminative_gradient");
        auto real_tape = disc.forward(s.y);
        out.loss += 1.0 - real_tape.output()[0];
        disc.accumulate_gradient(real_tape, real_upstream, out.discriminator);

        auto pass = detail::generator_pass(model, s.x);
        auto fake_tape = disc.forward(pass.tape.output());
        out.loss += fake_tape.output()[0];
        // The discriminator's input gradient is only needed to reach the HF block.
        std::fill(out.discriminator.input.begin(), out.discriminator.input.end(), 0.0);
        disc.accumulate_gradient(fake_tape, fake_upstream, out.discriminator);
        model.hf_block.accumulate_gradient(pass.tape, out.discriminator.input, out.hf_block);
    }
    std::fill(out.discriminator.input.begin(), out.discriminator.input.end(), 0.0);
    out.loss *= inv_n;
    return out;
}

/// Generative loss and its gradients with respect to the HF block and the
/// discriminator.
inline AdversarialGradient generative_gradient(GanMdfModel const& model, std::span<const Point> inputs)
{
    detail::require_batch(inputs, "generative_gradient");
    const double inv_n = 1.0 / static_cast<double>(inputs.size());
    auto const& disc = model.discriminator;
    AdversarialGradient out{0.0, model.hf_block.zero_gradients(), disc.zero_gradients()};
    const std::vector<double> upstream{-inv_n};
    for (auto const& x : inputs) {
        auto pass = detail::generator_pass(model, x);
        auto fake_tape = disc.forward(pass.tape.output());
        out.loss += 1.0 - fake_tape.output()[0];
        std::fill(out.discriminator.input.begin(), out.discriminator.input.end(), 0.0);
        disc.accumulate_gradient(fake_tape, upstream, out.discriminator);
        model.hf_block.accumulate_gradient(pass.tape, out.discriminator.input, out.hf_block);
    }
    std::fill(out.discriminator.input.begin(), out.discriminator.input.end(), 0.0);
    out.loss *= inv_n;
    return out;
}

/// One Adam state per (parameter block, loss) pair.
struct OptimizerStates {
    nn::AdamState hf_supervised;
    nn::AdamState hf_discriminative;
    nn::AdamState hf_generative;
    nn::AdamState disc_discriminative;
    nn::AdamState disc_generative;

    static OptimizerStates create(GanMdfModel const& model)
    {
        return {nn::AdamState(model.hf_block), nn::AdamState(model.hf_block), nn::AdamState(model.hf_block),
                nn::AdamState(model.discriminator), nn::AdamState(model.discriminator)};
    }
};

/// Runs the five update stages of one adversarial iteration on `batch`:
///   1. supervised step on the HF block,
///   2. discriminative step (HF block and discriminator in PaperFaithful mode,
///      discriminator only in StandardGan mode),
///   3. supervised step,
///   4. generative step (HF block and discriminator in PaperFaithful mode,
///      HF block only in StandardGan mode),
///   5. supervised step.
/// Stages 1, 3 and 5 are skipped when the supervised trick is off. In each
/// two-network stage both gradients are taken before either network moves.
inline LossRecord adversarial_iteration(GanMdfModel& model, OptimizerStates& states, std::span<const Sample> batch,
                                        TrainingConfig const& config, std::size_t iteration)
{
    detail::require_batch(batch, "adversarial_iteration");
    if (!model.lf_block.frozen()) {
        throw ContractViolation("adversarial_iteration: LF block must be pretrained and frozen");
    }
    const bool faithful = config.mode == TrainingMode::PaperFaithful;
    LossRecord rec;
    rec.iteration = iteration;
    auto check = [&](double v, char const* name) {
        if (!std::isfinite(v)) throw DivergenceError("adversarial training iteration", iteration, name);
    };
    auto supervised_step = [&] {
        auto g = supervised_gradient(model, batch);
        check(g.loss, "L_S");
        nn::adam_step(model.hf_block, g.hf_block, states.hf_supervised, config.lr_s);
        return g.loss;
    };

    if (config.supervised_trick) {
        rec.supervised = supervised_step();
    } else {
        rec.supervised = supervised_loss(model, batch);
        check(rec.supervised, "L_S");
    }

    {
        auto g = discriminative_gradient(model, batch);
        rec.discriminative = g.loss;
        check(g.loss, "L_D");
        if (faithful) nn::adam_step(model.hf_block, g.hf_block, states.hf_discriminative, config.lr_d);
        nn::adam_step(model.discriminator, g.discriminator, states.disc_discriminative, config.lr_d);
    }

    if (config.supervised_trick) supervised_step();

    {
        std::vector<Point> inputs;
        inputs.reserve(batch.size());
        for (auto const& s : batch) inputs.push_back(s.x);
        auto g = generative_gradient(model, inputs);
        rec.generative = g.loss;
        check(g.loss, "L_G");
        nn::adam_step(model.hf_block, g.hf_block, states.hf_generative, config.lr_g);
        if (faithful) nn::adam_step(model.discriminator, g.discriminator, states.disc_generative, config.lr_g);
    }

    if (config.supervised_trick) supervised_step();
    return rec;
}

struct LfReport {
    std::vector<double> epoch_loss;
    double final_mse = 0.0;
};

/// Fits the LF block to `lf` (normalised coordinates) by mini-batch Adam on the
/// mean squared error, then freezes it.
inline LfReport pretrain_lf(GanMdfModel& model, std::span<const Sample> lf, TrainingConfig const& config)
{
    if (lf.empty()) {
        throw InvalidArgument("pretrain_lf: no LF samples");
    }
    config.validate();
    auto& net = model.lf_block;
    for (auto const& s : lf) {
        detail::require_width(s.x, net.input_width(), "pretrain_lf");
        detail::require_width(s.y, net.output_width(), "pretrain_lf");
    }
    const std::size_t n = lf.size();
    const std::size_t batch = std::min(config.lf_batch_cap, n);
    nn::AdamState state(net);
    Rng rng = make_rng(config.seed, "train/lf-batches");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> upstream(net.output_width());

    LfReport report;
    report.epoch_loss.reserve(config.epochs_lf);
    for (std::size_t epoch = 0; epoch < config.epochs_lf; ++epoch) {
        shuffle(std::span(order), rng);
        double epoch_sum = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            const double inv_b = 1.0 / static_cast<double>(stop - start);
            auto grads = net.zero_gradients();
            for (std::size_t k = start; k < stop; ++k) {
                auto const& s = lf[order[k]];
                auto tape = net.forward(s.x);
                auto const out = tape.output();
                for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] = 2.0 * (out[i] - s.y[i]) * inv_b;
                epoch_sum += detail::squared_distance(out, s.y);
                net.accumulate_gradient(tape, upstream, grads);
            }
            nn::adam_step(net, grads, state, config.lr_lf);
        }
        const double epoch_loss = epoch_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError("LF pretraining epoch", epoch + 1, "LF mean squared error");
        }
        report.epoch_loss.push_back(epoch_loss);
    }

    double total = 0.0;
    for (auto const& s : lf) total += detail::squared_distance(net.evaluate(s.x), s.y);
    report.final_mse = total / static_cast<double>(n);
    net.freeze();
    return report;
}

struct AdversarialReport {
    std::vector<LossRecord> trace;
    std::size_t batch_size = 0;
};

/// Adversarial phase on `hf` (normalised coordinates). One epoch is one pass
/// over the HF samples in shuffled mini-batches of min(hf_batch_cap, I_H);
/// every mini-batch is one adversarial iteration.
inline AdversarialReport train_adversarial(GanMdfModel& model, std::span<const Sample> hf,
                                           TrainingConfig const& config)
{
    if (!model.lf_block.frozen()) {
        throw ContractViolation("train_adversarial: LF block must be pretrained and frozen");
    }
    if (hf.size() < 2) {
        throw InvalidArgument("train_adversarial: need at least two HF samples");
    }
    config.validate();
    for (auto const& s : hf) {
        detail::require_width(s.x, model.d1(), "train_adversarial");
        detail::require_width(s.y, model.d2(), "train_adversarial");
    }
    const std::size_t n = hf.size();
    AdversarialReport report;
    report.batch_size = std::min(config.hf_batch_cap, n);
    auto states = OptimizerStates::create(model);
    Rng rng = make_rng(config.seed, "train/hf-batches");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Sample> batch;
    std::size_t iteration = 0;
    for (std::size_t epoch = 0; epoch < config.epochs_hf; ++epoch) {
        shuffle(std::span(order), rng);
        for (std::size_t start = 0; start < n; start += report.batch_size) {
            const std::size_t stop = std::min(start + report.batch_size, n);
            batch.clear();
            for (std::size_t k = start; k < stop; ++k) batch.push_back(hf[order[k]]);
            report.trace.push_back(adversarial_iteration(model, states, batch, config, ++iteration));
        }
    }
    return report;
}

/// Model with normalizers fitted to `ds`: inputs on the LF inputs, outputs on
/// each fidelity's own responses.
inline GanMdfModel prepare_model(data::MultiFidelityDataset const& ds, TrainingConfig const& config)
{
    config.validate();
    auto model = GanMdfModel::create(ds.d1, ds.d2, config);
    if (ds.lf.empty() || ds.hf.empty()) {
        throw InvalidArgument("prepare_model: dataset needs LF and HF samples");
    }
    model.input_norm = data::fit_normalizer(config.normalizer, ds.lf_inputs());
    model.lf_output_norm = data::fit_normalizer(config.normalizer, ds.lf_outputs());
    model.hf_output_norm = data::fit_normalizer(config.normalizer, ds.hf_outputs());
    return model;
}

inline std::vector<Sample> to_model_space(std::span<const Sample> samples, data::Normalizer const& in,
                                          data::Normalizer const& out)
{
    std::vector<Sample> r;
    r.reserve(samples.size());
    for (auto const& s : samples) r.push_back({in.transform(s.x), out.transform(s.y)});
    return r;
}

struct FitResult {
    GanMdfModel model;
    LfReport lf_report;
    AdversarialReport adversarial;
    std::uint64_t lf_checksum_before = 0;
    std::uint64_t lf_checksum_after = 0;
    std::vector<std::string> warnings;

    bool lf_block_intact() const noexcept { return lf_checksum_before == lf_checksum_after; }
};

/// Adversarial phase on an already pretrained model, recording the LF-block
/// checksum on both sides of it.
inline FitResult finish_fit(GanMdfModel model, LfReport lf_report, data::MultiFidelityDataset const& ds,
                            TrainingConfig const& config)
{
    FitResult r;
    r.warnings = config.validate();
    for (auto const* norm : {&model.input_norm, &model.lf_output_norm, &model.hf_output_norm}) {
        r.warnings.insert(r.warnings.end(), norm->warnings().begin(), norm->warnings().end());
    }
    const auto hf = to_model_space(ds.hf, model.input_norm, model.hf_output_norm);
    r.lf_checksum_before = model.lf_block.checksum();
    r.adversarial = train_adversarial(model, hf, config);
    r.lf_checksum_after = model.lf_block.checksum();
    r.lf_report = std::move(lf_report);
    r.model = std::move(model);
    return r;
}

/// Normalise, pretrain the LF block, then run the adversarial phase.
inline FitResult fit(data::MultiFidelityDataset const& ds, TrainingConfig const& config)
{
    auto model = prepare_model(ds, config);
    const auto lf = to_model_space(ds.lf, model.input_norm, model.lf_output_norm);
    auto lf_report = pretrain_lf(model, lf, config);
    return finish_fit(std::move(model), std::move(lf_report), ds, config);
}

} // namespace mdfgan::gan
