#pragma once

#include <cstddef>
#include <vector>

namespace mdfgan::data {

using Point = std::vector<double>;

/// One (input, response) pair.
struct Sample {
    Point x;
    Point y;

    friend bool operator==(Sample const&, Sample const&) = default;
};

struct Bound {
    double lo = 0.0;
    double hi = 1.0;

    friend bool operator==(Bound const&, Bound const&) = default;
};

} // namespace mdfgan::data
