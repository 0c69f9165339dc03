#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/data/types.hpp"

namespace mdfgan::data {

inline void validate_bounds(std::span<const Bound> bounds)
{
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        if (!std::isfinite(bounds[j].lo) || !std::isfinite(bounds[j].hi) || !(bounds[j].lo < bounds[j].hi)) {
            throw InvalidArgument("degenerate bounds in dimension " + std::to_string(j));
        }
    }
}

/// Index of the equal-width stratum of [lo, hi] that holds `v`.
inline std::size_t stratum_of(double v, Bound b, std::size_t n) noexcept
{
    const double u = (v - b.lo) / (b.hi - b.lo) * static_cast<double>(n);
    if (u <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(std::floor(u));
    return k >= n ? n - 1 : k;
}

/// Latin hypercube design of `n` points in the box `bounds`: in every
/// dimension each of the n equal-width strata holds exactly one point, at a
/// uniform position inside it.
inline std::vector<Point> lhs_sample(std::size_t n, std::span<const Bound> bounds, Rng& rng)
{
    if (n == 0 || bounds.empty()) {
        throw InvalidArgument("lhs_sample: need n >= 1 and at least one dimension");
    }
    validate_bounds(bounds);
    const std::size_t d = bounds.size();
    std::vector<Point> points(n, Point(d));
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        shuffle(std::span(perm), rng);
        const Bound b = bounds[j];
        const double width = (b.hi - b.lo) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = perm[i];
            double v = b.lo + (static_cast<double>(k) + uniform01(rng)) * width;
            // Rounding can push a value across a stratum edge; pull it back.
            while (stratum_of(v, b, n) > k) v = std::nextafter(v, b.lo);
            while (stratum_of(v, b, n) < k) v = std::nextafter(v, b.hi);
            points[i][j] = v;
        }
    }
    return points;
}

inline std::vector<Point> lhs_sample(std::size_t n, std::span<const Bound> bounds, std::uint64_t seed)
{
    Rng rng = make_rng(seed, "lhs");
    return lhs_sample(n, bounds, rng);
}

} // namespace mdfgan::data
