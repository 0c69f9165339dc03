#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/nn/activation.hpp"

namespace mdfgan::nn {

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) noexcept { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }

    friend bool operator==(Matrix const&, Matrix const&) = default;
};

/// Per-layer values recorded by DenseNetwork::forward. `post[0]` is the
/// input; `pre[l]` / `post[l + 1]` belong to weight layer l.
struct ForwardTape {
    std::uint64_t revision = 0;
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;

    std::span<const double> output() const noexcept { return post.back(); }
};

/// Gradients with the parameter layout of a DenseNetwork, plus the gradient
/// with respect to the network input (needed to chain networks together).
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<double> input;

    Gradients& operator+=(Gradients const& other)
    {
        if (other.weights.size() != weights.size()) {
            throw ShapeError("gradient accumulation: layer count mismatch");
        }
        for (std::size_t l = 0; l < weights.size(); ++l) {
            for (std::size_t i = 0; i < weights[l].data.size(); ++i) weights[l].data[i] += other.weights[l].data[i];
            for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
        }
        for (std::size_t i = 0; i < input.size() && i < other.input.size(); ++i) input[i] += other.input[i];
        return *this;
    }

    std::vector<std::span<const double>> blocks() const
    {
        std::vector<std::span<const double>> out;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            out.emplace_back(weights[l].data);
            out.emplace_back(biases[l]);
        }
        return out;
    }
};

inline std::string block_name(std::size_t block)
{
    return "layer " + std::to_string(block / 2) + (block % 2 == 0 ? " weights" : " biases");
}

/// Feed-forward network: affine layers, a hidden activation after every layer
/// but the last, and a separate output activation (Identity for regression
/// heads, Sigmoid for a discriminator).
class DenseNetwork {
public:
    DenseNetwork() = default;

    /// Zero-initialised parameters.
    DenseNetwork(std::vector<std::size_t> layer_sizes, std::vector<ActivationKind> hidden,
                 ActivationKind output = ActivationKind::identity())
        : layer_sizes_(std::move(layer_sizes)), hidden_(std::move(hidden)), output_(output)
    {
        if (layer_sizes_.size() < 2) {
            throw ShapeError("a network needs at least an input and an output width");
        }
        for (auto w : layer_sizes_) {
            if (w == 0) {
                throw ShapeError("layer widths must be positive");
            }
        }
        if (hidden_.size() != layer_sizes_.size() - 2) {
            throw ShapeError("expected " + std::to_string(layer_sizes_.size() - 2) + " hidden activations, got " +
                             std::to_string(hidden_.size()));
        }
        for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
            weights_.emplace_back(layer_sizes_[l + 1], layer_sizes_[l]);
            biases_.emplace_back(layer_sizes_[l + 1], 0.0);
        }
        touch();
    }

    /// Uniform scaled initialisation in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    static DenseNetwork initialized(std::vector<std::size_t> layer_sizes, std::vector<ActivationKind> hidden,
                                    ActivationKind output, std::uint64_t seed)
    {
        DenseNetwork net(std::move(layer_sizes), std::move(hidden), output);
        Rng rng{seed};
        for (auto& w : net.weights_) {
            const double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
            for (auto& v : w.data) v = uniform(rng, -limit, limit);
        }
        net.touch();
        return net;
    }

    std::span<const std::size_t> layer_sizes() const noexcept { return layer_sizes_; }
    std::size_t num_layers() const noexcept { return weights_.size(); }
    std::size_t input_width() const noexcept { return layer_sizes_.front(); }
    std::size_t output_width() const noexcept { return layer_sizes_.back(); }
    std::span<const ActivationKind> hidden_activations() const noexcept { return hidden_; }
    ActivationKind const& output_activation() const noexcept { return output_; }
    ActivationKind const& activation(std::size_t layer) const noexcept
    {
        return layer + 1 == weights_.size() ? output_ : hidden_[layer];
    }

    Matrix const& weights(std::size_t layer) const { return weights_.at(layer); }
    std::vector<double> const& biases(std::size_t layer) const { return biases_.at(layer); }

    /// Identifies the current parameter values; changes on every mutation.
    std::uint64_t revision() const noexcept { return revision_; }

    bool frozen() const noexcept { return frozen_; }
    void freeze() noexcept { frozen_ = true; }
    void unfreeze() noexcept { frozen_ = false; }

    Matrix& weights_mut(std::size_t layer)
    {
        require_mutable();
        touch();
        return weights_.at(layer);
    }

    std::vector<double>& biases_mut(std::size_t layer)
    {
        require_mutable();
        touch();
        return biases_.at(layer);
    }

    /// Parameter blocks in the order w0, b0, w1, b1, ...
    std::vector<std::span<double>> parameter_blocks_mut()
    {
        require_mutable();
        touch();
        std::vector<std::span<double>> out;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            out.emplace_back(weights_[l].data);
            out.emplace_back(biases_[l]);
        }
        return out;
    }

    std::vector<std::span<const double>> parameter_blocks() const
    {
        std::vector<std::span<const double>> out;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            out.emplace_back(weights_[l].data);
            out.emplace_back(biases_[l]);
        }
        return out;
    }

    std::size_t parameter_count() const noexcept
    {
        std::size_t n = 0;
        for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].data.size() + biases_[l].size();
        return n;
    }

    /// FNV-1a over the raw parameter bits.
    std::uint64_t checksum() const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto block : parameter_blocks()) {
            for (double v : block) {
                auto bits = std::bit_cast<std::uint64_t>(v);
                for (int i = 0; i < 8; ++i) {
                    h ^= (bits >> (8 * i)) & 0xffU;
                    h *= 0x100000001b3ULL;
                }
            }
        }
        return h;
    }

    ForwardTape forward(std::span<const double> x) const
    {
        if (x.size() != input_width()) {
            throw ShapeError("forward: expected input width " + std::to_string(input_width()) + ", got " +
                             std::to_string(x.size()));
        }
        ForwardTape tape;
        tape.revision = revision_;
        tape.pre.reserve(weights_.size());
        tape.post.reserve(weights_.size() + 1);
        tape.post.emplace_back(x.begin(), x.end());
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            auto const& w = weights_[l];
            auto const& in = tape.post.back();
            std::vector<double> z(biases_[l]);
            for (std::size_t r = 0; r < w.rows; ++r) {
                const double* row = &w.data[r * w.cols];
                double acc = 0.0;
                for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * in[c];
                z[r] += acc;
            }
            auto a = activation_apply(activation(l), z);
            tape.pre.push_back(std::move(z));
            tape.post.push_back(std::move(a));
        }
        return tape;
    }

    std::vector<double> evaluate(std::span<const double> x) const
    {
        auto tape = forward(x);
        return std::move(tape.post.back());
    }

    /// Reverse-mode pass. `upstream` is dL/d output for a scalar loss L.
    Gradients gradient(ForwardTape const& tape, std::span<const double> upstream) const
    {
        Gradients g = zero_gradients();
        accumulate_gradient(tape, upstream, g);
        return g;
    }

    /// Adds the gradients of one backward pass onto `acc`, which must have this
    /// network's layout (see zero_gradients()).
    void accumulate_gradient(ForwardTape const& tape, std::span<const double> upstream, Gradients& acc) const
    {
        if (tape.revision != revision_ || tape.pre.size() != weights_.size()) {
            throw ContractViolation("gradient: tape was recorded against different parameters");
        }
        if (upstream.size() != output_width()) {
            throw ShapeError("gradient: expected upstream width " + std::to_string(output_width()) + ", got " +
                             std::to_string(upstream.size()));
        }
        if (acc.weights.size() != weights_.size() || acc.input.size() != input_width()) {
            throw ShapeError("gradient: accumulator layout does not match the network");
        }
        std::vector<double> delta_post(upstream.begin(), upstream.end());
        std::vector<double> delta_pre;
        for (std::size_t l = weights_.size(); l-- > 0;) {
            auto const& w = weights_[l];
            delta_pre.assign(w.rows, 0.0);
            activation_backward(activation(l), tape.pre[l], tape.post[l + 1], delta_post, delta_pre);

            auto const& in = tape.post[l];
            auto& gw = acc.weights[l].data;
            auto& gb = acc.biases[l];
            std::vector<double> next(w.cols, 0.0);
            for (std::size_t r = 0; r < w.rows; ++r) {
                const double d = delta_pre[r];
                const double* row = &w.data[r * w.cols];
                double* grow = &gw[r * w.cols];
                for (std::size_t c = 0; c < w.cols; ++c) {
                    grow[c] += d * in[c];
                    next[c] += row[c] * d;
                }
                gb[r] += d;
            }
            delta_post = std::move(next);
        }
        for (std::size_t i = 0; i < delta_post.size(); ++i) acc.input[i] += delta_post[i];
    }

    Gradients zero_gradients() const
    {
        Gradients g;
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            g.weights.emplace_back(weights_[l].rows, weights_[l].cols);
            g.biases.emplace_back(biases_[l].size(), 0.0);
        }
        g.input.assign(input_width(), 0.0);
        return g;
    }

    friend bool operator==(DenseNetwork const& a, DenseNetwork const& b)
    {
        return a.layer_sizes_ == b.layer_sizes_ && a.hidden_ == b.hidden_ && a.output_ == b.output_ &&
               a.weights_ == b.weights_ && a.biases_ == b.biases_;
    }

private:
    void require_mutable() const
    {
        if (frozen_) {
            throw ContractViolation("attempt to modify a frozen network");
        }
    }

    void touch() noexcept { revision_ = next_revision().fetch_add(1, std::memory_order_relaxed) + 1; }

    static std::atomic<std::uint64_t>& next_revision() noexcept
    {
        static std::atomic<std::uint64_t> counter{0};
        return counter;
    }

    std::vector<std::size_t> layer_sizes_;
    std::vector<ActivationKind> hidden_;
    ActivationKind output_ = ActivationKind::identity();
    std::vector<Matrix> weights_;
    std::vector<std::vector<double>> biases_;
    std::uint64_t revision_ = 0;
    bool frozen_ = false;
};

} // namespace mdfgan::nn
