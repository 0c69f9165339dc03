#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace mdfgan {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent stream per (seed, purpose) so that adding a consumer of
// randomness never shifts the draws of another.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) noexcept
{
    return splitmix64(seed ^ splitmix64(fnv1a(stream)));
}

inline Rng make_rng(std::uint64_t seed, std::string_view stream)
{
    return Rng{derive_seed(seed, stream)};
}

// The std distributions are implementation-defined; these are not, which keeps
// outputs byte-identical across standard libraries.

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) noexcept
{
    return lo + (hi - lo) * uniform01(rng);
}

/// Unbiased integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) noexcept
{
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = rng();
    while (r >= limit) {
        r = rng();
    }
    return static_cast<std::size_t>(r % bound);
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) noexcept
{
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

} // namespace mdfgan
