#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/random.hpp"
#include "mdfgan/data/csv.hpp"
#include "mdfgan/data/lhs.hpp"
#include "mdfgan/data/types.hpp"

namespace mdfgan::data {

/// Anything that can answer both fidelities on a bounded box.
template <typename S>
concept FidelitySource = requires(S const& s, std::span<const double> x) {
    { s.d1 } -> std::convertible_to<std::size_t>;
    { s.d2 } -> std::convertible_to<std::size_t>;
    { s.bounds } -> std::convertible_to<std::vector<Bound>>;
    { s.lf(x) } -> std::convertible_to<Point>;
    { s.hf(x) } -> std::convertible_to<Point>;
};

struct MultiFidelityDataset {
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    std::vector<Bound> bounds;
    std::vector<Sample> lf;
    std::vector<Sample> hf;
    std::uint64_t seed = 0;
    bool nested = false;

    std::vector<Point> lf_inputs() const { return column(lf, &Sample::x); }
    std::vector<Point> lf_outputs() const { return column(lf, &Sample::y); }
    std::vector<Point> hf_inputs() const { return column(hf, &Sample::x); }
    std::vector<Point> hf_outputs() const { return column(hf, &Sample::y); }

    friend bool operator==(MultiFidelityDataset const&, MultiFidelityDataset const&) = default;

private:
    static std::vector<Point> column(std::vector<Sample> const& s, Point Sample::*m)
    {
        std::vector<Point> out;
        out.reserve(s.size());
        for (auto const& e : s) out.push_back(e.*m);
        return out;
    }
};

struct DatasetOptions {
    /// Draw HF inputs as a subset of the LF inputs instead of an independent design.
    bool nested = false;
};

namespace detail {

template <typename Fn>
Point checked_response(Fn const& fn, Point const& x, std::size_t d2, char const* which)
{
    Point y = fn(x);
    if (y.size() != d2) {
        throw ShapeError(std::string(which) + " response has width " + std::to_string(y.size()) + ", expected " +
                         std::to_string(d2));
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(which) + " response is not finite");
        }
    }
    return y;
}

/// First `k` entries of a random permutation of 0..n-1.
inline std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, Rng& rng)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    }
    idx.resize(k);
    return idx;
}

} // namespace detail

/// LF and HF designs from independent Latin hypercubes (unnested unless
/// `options.nested`), responses from the source's two fidelity functions.
template <FidelitySource Source>
MultiFidelityDataset make_dataset(Source const& source, std::size_t n_lf, std::size_t n_hf, std::uint64_t seed,
                                  DatasetOptions options = {})
{
    if (n_hf < 1 || n_lf < n_hf) {
        throw InvalidArgument("make_dataset: need I_L >= I_H >= 1 (got I_L=" + std::to_string(n_lf) +
                              ", I_H=" + std::to_string(n_hf) + ")");
    }
    MultiFidelityDataset ds;
    ds.d1 = source.d1;
    ds.d2 = source.d2;
    ds.bounds = source.bounds;
    ds.seed = seed;
    ds.nested = options.nested;
    if (ds.bounds.size() != ds.d1) {
        throw ShapeError("make_dataset: bounds do not match d1");
    }

    Rng lf_rng = make_rng(seed, "dataset/lf-design");
    auto lf_x = lhs_sample(n_lf, ds.bounds, lf_rng);
    std::vector<Point> hf_x;
    if (options.nested) {
        Rng pick = make_rng(seed, "dataset/nested-pick");
        for (auto i : detail::draw_without_replacement(n_lf, n_hf, pick)) hf_x.push_back(lf_x[i]);
    } else {
        Rng hf_rng = make_rng(seed, "dataset/hf-design");
        hf_x = lhs_sample(n_hf, ds.bounds, hf_rng);
    }

    auto lf_fn = [&](Point const& x) { return source.lf(std::span<const double>(x)); };
    auto hf_fn = [&](Point const& x) { return source.hf(std::span<const double>(x)); };
    for (auto& x : lf_x) {
        auto y = detail::checked_response(lf_fn, x, ds.d2, "LF");
        ds.lf.push_back({std::move(x), std::move(y)});
    }
    for (auto& x : hf_x) {
        auto y = detail::checked_response(hf_fn, x, ds.d2, "HF");
        ds.hf.push_back({std::move(x), std::move(y)});
    }
    return ds;
}

/// Fresh HF evaluation points for measuring a trained surrogate.
template <FidelitySource Source>
std::vector<Sample> make_test_set(Source const& source, std::size_t n, std::uint64_t seed)
{
    Rng rng = make_rng(seed, "dataset/test-design");
    std::vector<Sample> out;
    for (auto& x : lhs_sample(n, source.bounds, rng)) {
        auto y = detail::checked_response([&](Point const& p) { return source.hf(std::span<const double>(p)); }, x,
                                          source.d2, "HF");
        out.push_back({std::move(x), std::move(y)});
    }
    return out;
}

/// LF and HF rows read from two CSV files.
struct CsvPairSource {
    std::string name = "csv";
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    std::vector<Sample> lf_rows;
    std::vector<Sample> hf_rows;

    static CsvPairSource load(std::filesystem::path const& lf_path, std::filesystem::path const& hf_path,
                              std::size_t d1, std::size_t d2)
    {
        CsvPairSource s;
        s.name = lf_path.stem().string() + "+" + hf_path.stem().string();
        s.d1 = d1;
        s.d2 = d2;
        s.lf_rows = load_csv(lf_path, d1, d2).samples;
        s.hf_rows = load_csv(hf_path, d1, d2).samples;
        return s;
    }
};

struct CsvDraw {
    MultiFidelityDataset dataset;
    /// HF rows not drawn for training, usable as a test set.
    std::vector<Sample> hf_holdout;
};

/// Subsamples I_L LF rows and I_H HF rows without replacement.
inline CsvDraw make_dataset(CsvPairSource const& source, std::size_t n_lf, std::size_t n_hf, std::uint64_t seed)
{
    if (n_lf < 1 || n_hf < 1) {
        throw InvalidArgument("make_dataset: need I_L >= 1 and I_H >= 1");
    }
    if (source.lf_rows.size() < n_lf) {
        throw InvalidArgument("make_dataset: LF file has " + std::to_string(source.lf_rows.size()) +
                              " rows, " + std::to_string(n_lf) + " requested");
    }
    if (source.hf_rows.size() < n_hf) {
        throw InvalidArgument("make_dataset: HF file has " + std::to_string(source.hf_rows.size()) +
                              " rows, " + std::to_string(n_hf) + " requested");
    }
    CsvDraw draw;
    auto& ds = draw.dataset;
    ds.d1 = source.d1;
    ds.d2 = source.d2;
    ds.seed = seed;

    Rng lf_rng = make_rng(seed, "dataset/csv-lf");
    for (auto i : detail::draw_without_replacement(source.lf_rows.size(), n_lf, lf_rng)) {
        ds.lf.push_back(source.lf_rows[i]);
    }
    Rng hf_rng = make_rng(seed, "dataset/csv-hf");
    auto picked = detail::draw_without_replacement(source.hf_rows.size(), source.hf_rows.size(), hf_rng);
    for (std::size_t k = 0; k < picked.size(); ++k) {
        (k < n_hf ? ds.hf : draw.hf_holdout).push_back(source.hf_rows[picked[k]]);
    }

    ds.bounds.assign(ds.d1, Bound{0.0, 0.0});
    bool first = true;
    for (auto const* rows : {&source.lf_rows, &source.hf_rows}) {
        for (auto const& s : *rows) {
            for (std::size_t j = 0; j < ds.d1; ++j) {
                if (first) {
                    ds.bounds[j] = {s.x[j], s.x[j]};
                } else {
                    ds.bounds[j].lo = std::min(ds.bounds[j].lo, s.x[j]);
                    ds.bounds[j].hi = std::max(ds.bounds[j].hi, s.x[j]);
                }
            }
            first = false;
        }
    }
    return draw;
}

/// Writes `<prefix>lf.csv`, `<prefix>hf.csv` and a `<prefix>dataset.json`
/// sidecar (bounds, seed, counts). Returns the written paths.
inline std::vector<std::filesystem::path> export_dataset(MultiFidelityDataset const& ds,
                                                         std::filesystem::path const& dir,
                                                         std::string const& prefix = "")
{
    const auto lf_path = dir / (prefix + "lf.csv");
    const auto hf_path = dir / (prefix + "hf.csv");
    const auto meta_path = dir / (prefix + "dataset.json");
    write_samples_csv(lf_path, ds.lf);
    write_samples_csv(hf_path, ds.hf);

    nlohmann::json meta;
    meta["d1"] = ds.d1;
    meta["d2"] = ds.d2;
    meta["I_L"] = ds.lf.size();
    meta["I_H"] = ds.hf.size();
    meta["seed"] = ds.seed;
    meta["nested"] = ds.nested;
    auto& b = meta["bounds"] = nlohmann::json::array();
    for (auto const& bound : ds.bounds) b.push_back({bound.lo, bound.hi});
    std::ofstream out(meta_path);
    if (!out) {
        throw IoError("cannot write '" + meta_path.string() + "'");
    }
    out << meta.dump(2) << '\n';
    return {lf_path, hf_path, meta_path};
}

} // namespace mdfgan::data
