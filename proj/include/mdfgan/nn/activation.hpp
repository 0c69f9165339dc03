#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/format.hpp"

namespace mdfgan::nn {

enum class ActivationTag {
    Sigmoid,
    LeakyRelu,
    Ricker,
    Dft,
    InverseMultiquadratic,
    Identity,
};

/// Hidden-layer activation. Everything but Dft acts elementwise; Dft mixes the
/// whole pre-activation vector of its layer.
struct ActivationKind {
    ActivationTag tag = ActivationTag::Identity;
    double alpha = 0.01; // LeakyRelu slope, ignored otherwise

    static constexpr ActivationKind sigmoid() noexcept { return {ActivationTag::Sigmoid}; }
    static constexpr ActivationKind ricker() noexcept { return {ActivationTag::Ricker}; }
    static constexpr ActivationKind dft() noexcept { return {ActivationTag::Dft}; }
    static constexpr ActivationKind inverse_multiquadratic() noexcept { return {ActivationTag::InverseMultiquadratic}; }
    static constexpr ActivationKind identity() noexcept { return {ActivationTag::Identity}; }

    static ActivationKind leaky_relu(double alpha = 0.01)
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw InvalidArgument("leaky_relu slope must be positive and finite");
        }
        return {ActivationTag::LeakyRelu, alpha};
    }

    bool elementwise() const noexcept { return tag != ActivationTag::Dft; }

    friend bool operator==(ActivationKind const& a, ActivationKind const& b) noexcept
    {
        return a.tag == b.tag && (a.tag != ActivationTag::LeakyRelu || a.alpha == b.alpha);
    }
};

inline std::string_view tag_name(ActivationTag tag) noexcept
{
    switch (tag) {
    case ActivationTag::Sigmoid: return "sigmoid";
    case ActivationTag::LeakyRelu: return "leaky_relu";
    case ActivationTag::Ricker: return "ricker";
    case ActivationTag::Dft: return "dft";
    case ActivationTag::InverseMultiquadratic: return "inverse_multiquadratic";
    case ActivationTag::Identity: return "identity";
    }
    return "unknown";
}

inline ActivationTag parse_tag(std::string_view name)
{
    for (auto tag : {ActivationTag::Sigmoid, ActivationTag::LeakyRelu, ActivationTag::Ricker,
                     ActivationTag::Dft, ActivationTag::InverseMultiquadratic, ActivationTag::Identity}) {
        if (name == tag_name(tag)) {
            return tag;
        }
    }
    if (name == "imq") {
        return ActivationTag::InverseMultiquadratic;
    }
    throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

/// "sigmoid", "dft", "leaky_relu", "leaky_relu:0.2", ...
inline ActivationKind parse_activation(std::string_view text)
{
    text = trim(text);
    const auto colon = text.find(':');
    const auto tag = parse_tag(text.substr(0, colon));
    if (tag == ActivationTag::LeakyRelu) {
        if (colon == std::string_view::npos) {
            return ActivationKind::leaky_relu();
        }
        auto alpha = parse_double(text.substr(colon + 1));
        if (!alpha) {
            throw InvalidArgument("bad leaky_relu slope in '" + std::string(text) + "'");
        }
        return ActivationKind::leaky_relu(*alpha);
    }
    if (colon != std::string_view::npos) {
        throw InvalidArgument("activation '" + std::string(text) + "' takes no parameter");
    }
    return {tag};
}

inline std::string to_string(ActivationKind const& kind)
{
    std::string s(tag_name(kind.tag));
    if (kind.tag == ActivationTag::LeakyRelu) {
        s += ":" + format_double(kind.alpha);
    }
    return s;
}

namespace detail {

inline constexpr double kRickerScale = 1000.0;

inline double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

// (1 - 2 t exp(-t))^2 with t = (pi x / 1000)^2
inline double ricker(double x) noexcept
{
    const double u = std::numbers::pi * x / kRickerScale;
    const double t = u * u;
    const double inner = 1.0 - 2.0 * t * std::exp(-t);
    return inner * inner;
}

inline double ricker_derivative(double x) noexcept
{
    const double u = std::numbers::pi * x / kRickerScale;
    const double t = u * u;
    const double e = std::exp(-t);
    const double inner = 1.0 - 2.0 * t * e;
    const double dinner_dt = -2.0 * e * (1.0 - t);
    const double dt_dx = 2.0 * u * std::numbers::pi / kRickerScale;
    return 2.0 * inner * dinner_dt * dt_dx;
}

// cos(2 pi n k / M) with the product reduced mod M first so large indices keep
// full precision.
inline double dft_kernel(std::size_t n, std::size_t k, std::size_t m) noexcept
{
    const auto r = (n * k) % m;
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m));
}

inline void check_finite(std::span<const double> v)
{
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidArgument("activation input is not finite");
        }
    }
}

} // namespace detail

/// Applies `kind` to a full layer pre-activation vector.
///
/// Dft returns the real part of the discrete Fourier transform of `v`,
/// y(n) = sum_k v(k) cos(2 pi n k / M), which keeps the layer width.
inline std::vector<double> activation_apply(ActivationKind const& kind, std::span<const double> v)
{
    detail::check_finite(v);
    std::vector<double> out(v.size());
    switch (kind.tag) {
    case ActivationTag::Sigmoid:
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = detail::sigmoid(v[i]);
        break;
    case ActivationTag::LeakyRelu:
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : kind.alpha * v[i];
        break;
    case ActivationTag::Ricker:
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = detail::ricker(v[i]);
        break;
    case ActivationTag::InverseMultiquadratic:
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / std::sqrt(1.0 + v[i] * v[i]);
        break;
    case ActivationTag::Identity:
        std::copy(v.begin(), v.end(), out.begin());
        break;
    case ActivationTag::Dft: {
        const std::size_t m = v.size();
        if (m == 0) {
            throw InvalidArgument("dft activation needs a non-empty layer");
        }
        for (std::size_t n = 0; n < m; ++n) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += v[k] * detail::dft_kernel(n, k, m);
            out[n] = acc;
        }
        break;
    }
    }
    return out;
}

/// Pulls `upstream` (dL/d output) back through the activation into dL/d pre.
/// `pre` and `post` are the values recorded by the forward pass.
inline void activation_backward(ActivationKind const& kind, std::span<const double> pre,
                                std::span<const double> post, std::span<const double> upstream,
                                std::span<double> out)
{
    const std::size_t m = pre.size();
    if (post.size() != m || upstream.size() != m || out.size() != m) {
        throw ShapeError("activation_backward: width mismatch");
    }
    switch (kind.tag) {
    case ActivationTag::Sigmoid:
        for (std::size_t i = 0; i < m; ++i) out[i] = upstream[i] * post[i] * (1.0 - post[i]);
        break;
    case ActivationTag::LeakyRelu:
        // x == 0 takes the alpha branch.
        for (std::size_t i = 0; i < m; ++i) out[i] = upstream[i] * (pre[i] > 0.0 ? 1.0 : kind.alpha);
        break;
    case ActivationTag::Ricker:
        for (std::size_t i = 0; i < m; ++i) out[i] = upstream[i] * detail::ricker_derivative(pre[i]);
        break;
    case ActivationTag::InverseMultiquadratic:
        // d/dx (1 + x^2)^(-1/2) = -x (1 + x^2)^(-3/2) = -x y^3
        for (std::size_t i = 0; i < m; ++i) out[i] = -upstream[i] * pre[i] * post[i] * post[i] * post[i];
        break;
    case ActivationTag::Identity:
        std::copy(upstream.begin(), upstream.end(), out.begin());
        break;
    case ActivationTag::Dft:
        // The real-part map is a symmetric cosine matrix, so its transpose is itself.
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            for (std::size_t n = 0; n < m; ++n) acc += upstream[n] * detail::dft_kernel(n, k, m);
            out[k] = acc;
        }
        break;
    }
}

} // namespace mdfgan::nn
