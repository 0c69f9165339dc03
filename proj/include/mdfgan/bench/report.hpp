#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdfgan/bench/experiment.hpp"
#include "mdfgan/core/error.hpp"
#include "mdfgan/core/format.hpp"

namespace mdfgan::bench {

namespace detail {

inline std::string format_ms(double ms)
{
    return format_double(std::round(ms * 1000.0) / 1000.0);
}

inline nlohmann::json nullable(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

template <typename Writer>
void write_file(std::filesystem::path const& path, Writer&& writer)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    writer(out);
}

} // namespace detail

/// One row per repeat: benchmark,I_L,I_H,seed,nrmse,wall_ms. Failed repeats
/// have an NaN nrmse.
inline void write_runs_csv(std::ostream& out, std::span<const ExperimentResult> results)
{
    out << "benchmark,I_L,I_H,seed,nrmse,wall_ms\n";
    for (auto const& r : results) {
        for (auto const& run : r.runs) {
            out << r.benchmark << ',' << r.n_lf << ',' << r.n_hf << ',' << run.seed << ','
                << format_double(run.nrmse.value_or(std::nan(""))) << ',' << detail::format_ms(run.wall_ms) << '\n';
        }
    }
}

/// One row per grid point: benchmark,I_L,I_H,repeats,failed,mean_nrmse.
inline void write_summary_csv(std::ostream& out, std::span<const ExperimentResult> results)
{
    out << "benchmark,I_L,I_H,repeats,failed,mean_nrmse\n";
    for (auto const& r : results) {
        out << r.benchmark << ',' << r.n_lf << ',' << r.n_hf << ',' << r.runs.size() << ',' << r.failures() << ','
            << format_double(r.mean_nrmse) << '\n';
    }
}

inline nlohmann::json result_to_json(ExperimentResult const& r)
{
    nlohmann::json per_seed = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();
    for (auto const& run : r.runs) {
        per_seed.push_back({{"seed", run.seed}, {"nrmse", detail::nullable(run.nrmse.value_or(std::nan("")))}});
        if (!run.error.empty()) failures.push_back({{"seed", run.seed}, {"error", run.error}});
    }
    return {
        {"variant", r.variant},     {"I_L", r.n_lf},       {"I_H", r.n_hf},
        {"mean_nrmse", detail::nullable(r.mean_nrmse)},    {"partial", r.partial},
        {"per_seed", per_seed},     {"failures", failures},
    };
}

/// Table-style summary: {"benchmark", "protocol", "rows": [...]} with one row
/// per grid point.
inline nlohmann::json summary_json(std::span<const ExperimentResult> results, std::string const& protocol)
{
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& r : results) rows.push_back(result_to_json(r));
    return {
        {"benchmark", results.empty() ? std::string() : results.front().benchmark},
        {"protocol", protocol},
        {"rows", rows},
    };
}

inline void write_baselines_csv(std::ostream& out, BaselineComparison const& cmp)
{
    out << "variant,benchmark,I_L,I_H,seed,nrmse,wall_ms\n";
    for (auto const* r : {&cmp.gan_mdf, &cmp.pgan, &cmp.hf_only}) {
        for (auto const& run : r->runs) {
            out << r->variant << ',' << r->benchmark << ',' << r->n_lf << ',' << r->n_hf << ',' << run.seed << ','
                << format_double(run.nrmse.value_or(std::nan(""))) << ',' << detail::format_ms(run.wall_ms) << '\n';
        }
    }
}

inline nlohmann::json baselines_json(BaselineComparison const& cmp)
{
    return {
        {"benchmark", cmp.gan_mdf.benchmark},
        {"I_L", cmp.gan_mdf.n_lf},
        {"I_H", cmp.gan_mdf.n_hf},
        {"mean_nrmse",
         {{"gan-mdf", detail::nullable(cmp.gan_mdf.mean_nrmse)},
          {"pgan", detail::nullable(cmp.pgan.mean_nrmse)},
          {"hf-only", detail::nullable(cmp.hf_only.mean_nrmse)}}},
        {"variants", {result_to_json(cmp.gan_mdf), result_to_json(cmp.pgan), result_to_json(cmp.hf_only)}},
    };
}

inline void write_scatter_csv(std::ostream& out, std::span<const std::pair<double, double>> points)
{
    out << "y_lf,y_hf\n";
    for (auto const& [lo, hi] : points) out << format_double(lo) << ',' << format_double(hi) << '\n';
}

} // namespace mdfgan::bench
