#pragma once

#include <cmath>
#include <span>

#include "mdfgan/core/error.hpp"
#include "mdfgan/data/types.hpp"

namespace mdfgan::bench {

/// sqrt(sum ||truth_n - pred_n||^2) / sqrt(sum ||truth_n||^2)
inline double nrmse(std::span<const data::Point> truth, std::span<const data::Point> pred)
{
    if (truth.empty() || truth.size() != pred.size()) {
        throw InvalidArgument("nrmse: truth and prediction need the same non-zero length");
    }
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t n = 0; n < truth.size(); ++n) {
        if (truth[n].size() != pred[n].size()) {
            throw ShapeError("nrmse: response widths differ at row " + std::to_string(n));
        }
        for (std::size_t i = 0; i < truth[n].size(); ++i) {
            const double d = truth[n][i] - pred[n][i];
            err += d * d;
            ref += truth[n][i] * truth[n][i];
        }
    }
    if (!(ref > 0.0)) {
        throw InvalidArgument("nrmse: all-zero truth leaves the error unnormalised");
    }
    return std::sqrt(err) / std::sqrt(ref);
}

} // namespace mdfgan::bench
