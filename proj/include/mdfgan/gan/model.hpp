#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "mdfgan/data/types.hpp"
#include "mdfgan/gan/config.hpp"
#include "mdfgan/nn/dense_network.hpp"

namespace mdfgan::gan {

/// cant(x, q): x followed by q.
inline std::vector<double> concat(std::span<const double> x, std::span<const double> q)
{
    std::vector<double> out;
    out.reserve(x.size() + q.size());
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), q.begin(), q.end());
    return out;
}

/// Generator (LF block feeding an HF block) plus discriminator.
///
/// The LF block maps x (width d1) to an LF feature q (width d2); the HF block
/// maps cant(x, q) (width d1 + d2) to the HF estimate (width d2); the
/// discriminator scores a d2-wide response with a sigmoid head. All three
/// networks work in normalised coordinates; predict() handles the scaling.
struct GanMdfModel {
    nn::DenseNetwork lf_block;
    nn::DenseNetwork hf_block;
    nn::DenseNetwork discriminator;
    data::Normalizer input_norm;
    data::Normalizer lf_output_norm;
    data::Normalizer hf_output_norm;

    /// Fresh networks with the configured architecture and identity normalizers.
    static GanMdfModel create(std::size_t d1, std::size_t d2, TrainingConfig const& config)
    {
        if (d1 == 0 || d2 == 0) {
            throw ShapeError("GanMdfModel: d1 and d2 must be positive");
        }
        auto const& arch = config.architecture;
        auto sizes = [&](std::size_t in, std::size_t out) {
            std::vector<std::size_t> s{in};
            s.insert(s.end(), arch.hidden.begin(), arch.hidden.end());
            s.push_back(out);
            return s;
        };
        GanMdfModel m;
        m.lf_block = nn::DenseNetwork::initialized(sizes(d1, d2), arch.activations, nn::ActivationKind::identity(),
                                                   derive_seed(config.seed, "init/lf-block"));
        m.hf_block = nn::DenseNetwork::initialized(sizes(d1 + d2, d2), arch.activations,
                                                   nn::ActivationKind::identity(),
                                                   derive_seed(config.seed, "init/hf-block"));
        m.discriminator = nn::DenseNetwork::initialized(sizes(d2, 1), arch.activations, nn::ActivationKind::sigmoid(),
                                                        derive_seed(config.seed, "init/discriminator"));
        m.input_norm = data::Normalizer::identity(d1);
        m.lf_output_norm = data::Normalizer::identity(d2);
        m.hf_output_norm = data::Normalizer::identity(d2);
        return m;
    }

    std::size_t d1() const noexcept { return lf_block.input_width(); }
    std::size_t d2() const noexcept { return lf_block.output_width(); }

    /// Throws ShapeError unless the three networks fit together.
    void check_consistency() const
    {
        const auto a = d1();
        const auto b = d2();
        if (hf_block.input_width() != a + b || hf_block.output_width() != b || discriminator.input_width() != b ||
            discriminator.output_width() != 1) {
            throw ShapeError("GanMdfModel: LF block, HF block and discriminator widths do not fit together");
        }
        if (discriminator.output_activation().tag != nn::ActivationTag::Sigmoid) {
            throw ShapeError("GanMdfModel: discriminator head must be a sigmoid");
        }
        if (input_norm.columns() != a || lf_output_norm.columns() != b || hf_output_norm.columns() != b) {
            throw ShapeError("GanMdfModel: normalizer widths do not match d1/d2");
        }
    }

    /// HF-block input cant(x, lf_block(x)) for a normalised x.
    std::vector<double> hf_input(std::span<const double> x) const
    {
        if (x.size() != d1()) {
            throw ShapeError("generator: expected input width " + std::to_string(d1()) + ", got " +
                             std::to_string(x.size()));
        }
        const auto q = lf_block.evaluate(x);
        return concat(x, q);
    }

    /// G[x] in normalised coordinates.
    std::vector<double> generator_forward(std::span<const double> x) const
    {
        return hf_block.evaluate(hf_input(x));
    }

    /// HF estimates in original units: normalise, generate, de-normalise.
    std::vector<data::Point> predict(std::span<const data::Point> inputs) const
    {
        std::vector<data::Point> out;
        out.reserve(inputs.size());
        for (auto const& x : inputs) {
            out.push_back(hf_output_norm.inverse_transform(generator_forward(input_norm.transform(x))));
        }
        return out;
    }
};

} // namespace mdfgan::gan
