#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdfgan/core/error.hpp"
#include "mdfgan/data/types.hpp"

namespace mdfgan::data {

enum class NormalizerKind { None, MinMax, Standard };

inline std::string_view to_string(NormalizerKind kind) noexcept
{
    switch (kind) {
    case NormalizerKind::None: return "none";
    case NormalizerKind::MinMax: return "minmax";
    case NormalizerKind::Standard: return "standard";
    }
    return "none";
}

inline NormalizerKind parse_normalizer_kind(std::string_view s)
{
    if (s == "none") return NormalizerKind::None;
    if (s == "minmax" || s == "min-max") return NormalizerKind::MinMax;
    if (s == "standard") return NormalizerKind::Standard;
    throw InvalidArgument("unknown normalizer '" + std::string(s) + "'");
}

/// Per-column affine map z = (x - offset) / scale.
///
/// MinMax uses offset = min, scale = max - min; Standard uses the column mean
/// and population standard deviation. A column with zero spread is passed
/// through unchanged and a warning is recorded.
class Normalizer {
public:
    Normalizer() = default;

    /// Pass-through map on `columns` columns.
    static Normalizer identity(std::size_t columns)
    {
        Normalizer n;
        n.offset_.assign(columns, 0.0);
        n.scale_.assign(columns, 1.0);
        return n;
    }

    static Normalizer fit(NormalizerKind kind, std::span<const Point> rows)
    {
        if (rows.empty()) {
            throw InvalidArgument("fit_normalizer: no rows");
        }
        const std::size_t d = rows.front().size();
        for (auto const& r : rows) {
            if (r.size() != d) {
                throw ShapeError("fit_normalizer: ragged rows");
            }
        }
        Normalizer n = identity(d);
        n.kind_ = kind;
        if (kind == NormalizerKind::None) {
            return n;
        }
        if (kind == NormalizerKind::Standard && rows.size() < 2) {
            throw InvalidArgument("fit_normalizer: standard scaling needs at least two rows");
        }
        const double count = static_cast<double>(rows.size());
        for (std::size_t j = 0; j < d; ++j) {
            double offset = 0.0;
            double spread = 0.0;
            if (kind == NormalizerKind::MinMax) {
                double lo = rows.front()[j];
                double hi = lo;
                for (auto const& r : rows) {
                    lo = std::min(lo, r[j]);
                    hi = std::max(hi, r[j]);
                }
                offset = lo;
                spread = hi - lo;
            } else {
                double sum = 0.0;
                for (auto const& r : rows) sum += r[j];
                const double mean = sum / count;
                double ss = 0.0;
                for (auto const& r : rows) ss += (r[j] - mean) * (r[j] - mean);
                offset = mean;
                spread = std::sqrt(ss / count);
            }
            if (spread > 0.0 && std::isfinite(spread)) {
                n.offset_[j] = offset;
                n.scale_[j] = spread;
            } else {
                n.warnings_.push_back("column " + std::to_string(j) + " has zero spread; left unscaled");
            }
        }
        return n;
    }

    NormalizerKind kind() const noexcept { return kind_; }
    std::size_t columns() const noexcept { return offset_.size(); }
    std::span<const double> offsets() const noexcept { return offset_; }
    std::span<const double> scales() const noexcept { return scale_; }
    std::span<const std::string> warnings() const noexcept { return warnings_; }

    Point transform(std::span<const double> x) const
    {
        check_width(x.size());
        Point z(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - offset_[j]) / scale_[j];
        return z;
    }

    Point inverse_transform(std::span<const double> z) const
    {
        check_width(z.size());
        Point x(z.size());
        for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * scale_[j] + offset_[j];
        return x;
    }

    std::vector<Point> transform_all(std::span<const Point> rows) const
    {
        std::vector<Point> out;
        out.reserve(rows.size());
        for (auto const& r : rows) out.push_back(transform(r));
        return out;
    }

    nlohmann::json to_json() const
    {
        return {{"kind", to_string(kind_)}, {"offset", offset_}, {"scale", scale_}, {"warnings", warnings_}};
    }

    static Normalizer from_json(nlohmann::json const& j)
    {
        Normalizer n;
        n.kind_ = parse_normalizer_kind(j.at("kind").get<std::string>());
        n.offset_ = j.at("offset").get<std::vector<double>>();
        n.scale_ = j.at("scale").get<std::vector<double>>();
        n.warnings_ = j.value("warnings", std::vector<std::string>{});
        if (n.offset_.size() != n.scale_.size()) {
            throw ShapeError("normalizer document: offset/scale length mismatch");
        }
        for (double s : n.scale_) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw InvalidArgument("normalizer document: scale must be positive");
            }
        }
        return n;
    }

private:
    void check_width(std::size_t w) const
    {
        if (w != offset_.size()) {
            throw ShapeError("normalizer: expected " + std::to_string(offset_.size()) + " columns, got " +
                             std::to_string(w));
        }
    }

    NormalizerKind kind_ = NormalizerKind::None;
    std::vector<double> offset_;
    std::vector<double> scale_;
    std::vector<std::string> warnings_;
};

inline Normalizer fit_normalizer(NormalizerKind kind, std::span<const Point> rows)
{
    return Normalizer::fit(kind, rows);
}

} // namespace mdfgan::data
