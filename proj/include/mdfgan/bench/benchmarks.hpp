#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/data/types.hpp"
#include "mdfgan/gan/config.hpp"

namespace mdfgan::bench {

using data::Bound;
using data::Point;
using ResponseFn = std::function<Point(std::span<const double>)>;

/// A low/high fidelity function pair on a box, with the training settings
/// used for it by default.
struct BenchmarkPair {
    std::string name;
    std::string description;
    std::size_t d1 = 1;
    std::size_t d2 = 1;
    std::vector<Bound> bounds;
    ResponseFn lf;
    ResponseFn hf;
    gan::TrainingConfig default_config;

    Point center() const
    {
        Point c(d1);
        for (std::size_t j = 0; j < d1; ++j) c[j] = 0.5 * (bounds[j].lo + bounds[j].hi);
        return c;
    }
};

namespace functions {

inline double forrester(double x)
{
    const double a = 6.0 * x - 2.0;
    return a * a * std::sin(12.0 * x - 4.0);
}

inline double forrester_lf(double x) { return 0.5 * forrester(x) + 10.0 * (x - 0.5) - 5.0; }

// Nonlinear fidelity relation: hf = (x - sqrt 2) lf^2.
inline double nonlinear_lf(double x) { return std::sin(8.0 * std::numbers::pi * x); }

inline double nonlinear_hf(double x)
{
    const double l = nonlinear_lf(x);
    return (x - std::numbers::sqrt2) * l * l;
}

// Quarter-period phase shift: the two fidelities are uncorrelated on [0, 1].
inline double phase_lf(double x) { return std::sin(8.0 * std::numbers::pi * x); }
inline double phase_hf(double x) { return std::sin(8.0 * std::numbers::pi * x + 0.5 * std::numbers::pi); }

inline double currin(double x1, double x2)
{
    // exp(-1 / 0) = 0, so x2 = 0 is finite.
    const double factor = 1.0 - std::exp(-1.0 / (2.0 * x2));
    const double num = 2300.0 * x1 * x1 * x1 + 1900.0 * x1 * x1 + 2092.0 * x1 + 60.0;
    const double den = 100.0 * x1 * x1 * x1 + 500.0 * x1 * x1 + 4.0 * x1 + 20.0;
    return factor * num / den;
}

inline double currin_lf(double x1, double x2)
{
    const double lo = std::max(0.0, x2 - 0.05);
    return 0.25 * (currin(x1 + 0.05, x2 + 0.05) + currin(x1 + 0.05, lo)) +
           0.25 * (currin(x1 - 0.05, x2 + 0.05) + currin(x1 - 0.05, lo));
}

inline double hartmann6(std::span<const double> x, std::array<double, 4> const& alpha)
{
    static constexpr double a[4][6] = {
        {10, 3, 17, 3.5, 1.7, 8},
        {0.05, 10, 17, 0.1, 8, 14},
        {3, 3.5, 1.7, 10, 17, 8},
        {17, 8, 0.05, 10, 0.1, 14},
    };
    static constexpr double p[4][6] = {
        {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
        {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
        {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
        {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
    };
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 6; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
        sum += alpha[i] * std::exp(-inner);
    }
    return -sum;
}

inline constexpr std::array<double, 4> kHartmannAlpha{1.0, 1.2, 3.0, 3.2};
inline constexpr std::array<double, 4> kHartmannAlphaLf{0.5, 0.5, 2.0, 4.0};

// x = (rw, r, Tu, Hu, Tl, Hl, L, Kw)
inline double borehole(std::span<const double> x, double numerator, double offset)
{
    const double rw = x[0], r = x[1], tu = x[2], hu = x[3], tl = x[4], hl = x[5], len = x[6], kw = x[7];
    const double log_ratio = std::log(r / rw);
    return numerator * tu * (hu - hl) /
           (log_ratio * (offset + 2.0 * len * tu / (log_ratio * rw * rw * kw) + tu / tl));
}

inline double borehole_hf(std::span<const double> x) { return borehole(x, 2.0 * std::numbers::pi, 1.0); }
inline double borehole_lf(std::span<const double> x) { return borehole(x, 5.0, 1.5); }

// Separable smooth pair on [-1, 1]^d; the LF version is rescaled and tilted.
inline double separable_hf(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v + 0.5 * std::sin(std::numbers::pi * v);
    return s + 1.0;
}

inline double separable_lf(std::span<const double> x)
{
    double tilt = 0.0;
    for (double v : x) tilt += 0.2 * v;
    return 0.8 * separable_hf(x) + tilt - 0.5;
}

} // namespace functions

namespace detail {

inline ResponseFn scalar_1d(double (*fn)(double))
{
    return [fn](std::span<const double> x) { return Point{fn(x[0])}; };
}

inline ResponseFn scalar_nd(std::function<double(std::span<const double>)> fn)
{
    return [fn = std::move(fn)](std::span<const double> x) { return Point{fn(x)}; };
}

inline gan::TrainingConfig settings(double lr_lf, double lr_d, double lr_g, double lr_s, std::size_t epochs_lf,
                                    std::size_t epochs_hf, data::NormalizerKind norm,
                                    std::vector<nn::ActivationKind> activations)
{
    gan::TrainingConfig c;
    c.lr_lf = lr_lf;
    c.lr_d = lr_d;
    c.lr_g = lr_g;
    c.lr_s = lr_s;
    c.epochs_lf = epochs_lf;
    c.epochs_hf = epochs_hf;
    c.normalizer = norm;
    c.architecture.hidden.assign(activations.size(), 32);
    c.architecture.activations = std::move(activations);
    return c;
}

} // namespace detail

/// The built-in benchmark pairs, in ascending input dimension.
inline std::vector<BenchmarkPair> registry()
{
    using data::NormalizerKind;
    using nn::ActivationKind;
    const auto sig = ActivationKind::sigmoid();
    std::vector<BenchmarkPair> r;

    r.push_back({"forrester1d", "Forrester function; LF is a scaled and linearly shifted copy", 1, 1, {{0.0, 1.0}},
                 detail::scalar_1d(functions::forrester_lf), detail::scalar_1d(functions::forrester),
                 detail::settings(0.03, 0.002, 0.001, 0.05, 4000, 350, NormalizerKind::MinMax, {sig, sig})});

    r.push_back({"nonlinear1d", "sin(8 pi x) LF with a quadratic, input-dependent HF relation", 1, 1, {{0.0, 1.0}},
                 detail::scalar_1d(functions::nonlinear_lf), detail::scalar_1d(functions::nonlinear_hf),
                 detail::settings(0.1, 0.002, 0.001, 0.05, 4000, 1500, NormalizerKind::MinMax,
                                  {sig, ActivationKind::dft()})});

    r.push_back({"phase1d", "Oscillation with a quarter-period phase shift between fidelities", 1, 1, {{0.0, 1.0}},
                 detail::scalar_1d(functions::phase_lf), detail::scalar_1d(functions::phase_hf),
                 detail::settings(0.1, 0.002, 0.001, 0.05, 3300, 1500, NormalizerKind::Standard, {sig, sig})});

    r.push_back({"currin2d", "Currin exponential; LF is a four-point local average", 2, 1, {{0.0, 1.0}, {0.0, 1.0}},
                 detail::scalar_nd([](std::span<const double> x) { return functions::currin_lf(x[0], x[1]); }),
                 detail::scalar_nd([](std::span<const double> x) { return functions::currin(x[0], x[1]); }),
                 detail::settings(0.03, 0.002, 0.001, 0.03, 4000, 1100, NormalizerKind::MinMax, {sig, sig})});

    r.push_back({"hartmann6d", "Hartmann-6; LF uses degraded mixture coefficients", 6, 1,
                 std::vector<Bound>(6, Bound{0.0, 1.0}),
                 detail::scalar_nd([](std::span<const double> x) {
                     return functions::hartmann6(x, functions::kHartmannAlphaLf);
                 }),
                 detail::scalar_nd([](std::span<const double> x) {
                     return functions::hartmann6(x, functions::kHartmannAlpha);
                 }),
                 detail::settings(0.03, 0.001, 0.0005, 0.003, 1200, 1100, NormalizerKind::Standard, {sig, sig})});

    r.push_back({"borehole8d", "Borehole water flow; LF uses the simplified constants", 8, 1,
                 {{0.05, 0.15}, {100.0, 50000.0}, {63070.0, 115600.0}, {990.0, 1110.0}, {63.1, 116.0},
                  {700.0, 820.0}, {1120.0, 1680.0}, {9855.0, 12045.0}},
                 detail::scalar_nd(functions::borehole_lf), detail::scalar_nd(functions::borehole_hf),
                 detail::settings(0.005, 0.002, 0.001, 0.01, 1000, 1000, NormalizerKind::MinMax, {sig, sig})});

    r.push_back({"separable20d", "Separable quadratic-plus-sine sum; LF rescaled and tilted", 20, 1,
                 std::vector<Bound>(20, Bound{-1.0, 1.0}), detail::scalar_nd(functions::separable_lf),
                 detail::scalar_nd(functions::separable_hf),
                 detail::settings(0.01, 0.002, 0.001, 0.05, 500, 900, NormalizerKind::MinMax, {sig, sig})});

    r.push_back({"separable30d", "Separable quadratic-plus-sine sum; LF rescaled and tilted", 30, 1,
                 std::vector<Bound>(30, Bound{-1.0, 1.0}), detail::scalar_nd(functions::separable_lf),
                 detail::scalar_nd(functions::separable_hf),
                 detail::settings(0.01, 0.002, 0.001, 0.05, 1500, 1500, NormalizerKind::MinMax, {sig, sig})});
    return r;
}

inline BenchmarkPair find_benchmark(std::string_view name)
{
    for (auto& b : registry()) {
        if (b.name == name) return b;
    }
    throw InvalidArgument("unknown benchmark '" + std::string(name) + "'");
}

} // namespace mdfgan::bench
