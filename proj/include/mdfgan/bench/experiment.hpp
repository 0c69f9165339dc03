#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mdfgan/bench/baselines.hpp"
#include "mdfgan/bench/benchmarks.hpp"
#include "mdfgan/bench/metrics.hpp"
#include "mdfgan/core/error.hpp"
#include "mdfgan/data/dataset.hpp"
#include "mdfgan/gan/training.hpp"

namespace mdfgan::bench {

using data::Sample;

struct ExperimentOptions {
    std::size_t repeats = 10;
    std::size_t test_size = 1000;
    std::uint64_t base_seed = 0;
    bool nested = false;
    unsigned jobs = 1;
};

/// Outcome of one repeat. A failed repeat keeps its error text and has no NRMSE.
struct RunRecord {
    std::uint64_t seed = 0;
    std::optional<double> nrmse;
    double wall_ms = 0.0;
    std::string error;
    bool lf_block_intact = true;
};

struct ExperimentResult {
    std::string benchmark;
    std::string variant = "gan-mdf";
    std::size_t n_lf = 0;
    std::size_t n_hf = 0;
    std::vector<RunRecord> runs;
    double mean_nrmse = std::numeric_limits<double>::quiet_NaN();
    /// Some repeats failed; the mean covers the successful ones only.
    bool partial = false;

    std::vector<double> nrmse_values() const
    {
        std::vector<double> v;
        for (auto const& r : runs) {
            if (r.nrmse) v.push_back(*r.nrmse);
        }
        return v;
    }

    std::size_t failures() const noexcept
    {
        return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](auto const& r) { return !r.nrmse; }));
    }

    bool all_lf_blocks_intact() const noexcept
    {
        return std::all_of(runs.begin(), runs.end(), [](auto const& r) { return r.lf_block_intact; });
    }
};

struct BaselineComparison {
    ExperimentResult gan_mdf;
    ExperimentResult pgan;
    ExperimentResult hf_only;
};

/// Training data and held-out HF test points for one repeat.
struct Trial {
    data::MultiFidelityDataset dataset;
    std::vector<Sample> test;
};

inline Trial draw_trial(BenchmarkPair const& pair, std::size_t n_lf, std::size_t n_hf, std::uint64_t seed,
                        ExperimentOptions const& options)
{
    if (options.test_size == 0) {
        throw InvalidArgument("test set size must be at least 1");
    }
    return {data::make_dataset(pair, n_lf, n_hf, seed, {options.nested}),
            data::make_test_set(pair, options.test_size, seed)};
}

/// CSV sources test on the HF rows left out of training.
inline Trial draw_trial(data::CsvPairSource const& source, std::size_t n_lf, std::size_t n_hf, std::uint64_t seed,
                        ExperimentOptions const& options)
{
    if (options.nested) {
        throw InvalidArgument("nested sampling needs a benchmark source, not CSV files");
    }
    auto draw = data::make_dataset(source, n_lf, n_hf, seed);
    if (draw.hf_holdout.empty()) {
        throw InvalidArgument("HF file has no rows left over for testing after drawing " + std::to_string(n_hf));
    }
    return {std::move(draw.dataset), std::move(draw.hf_holdout)};
}

inline std::string const& source_name(BenchmarkPair const& p) { return p.name; }
inline std::string const& source_name(data::CsvPairSource const& s) { return s.name; }

template <typename Model>
double evaluate_nrmse(Model const& model, std::span<const Sample> test)
{
    std::vector<data::Point> xs;
    std::vector<data::Point> ys;
    for (auto const& s : test) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    return nrmse(ys, model.predict(xs));
}

namespace detail {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index is handled
/// exactly once; the caller owns slot i of any output.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

inline void aggregate(ExperimentResult& r)
{
    auto values = r.nrmse_values();
    r.partial = values.size() != r.runs.size();
    if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        r.mean_nrmse = sum / static_cast<double>(values.size());
    }
}

inline void check_options(ExperimentOptions const& options)
{
    if (options.repeats == 0) {
        throw InvalidArgument("repeats must be at least 1");
    }
    if (options.test_size == 0) {
        throw InvalidArgument("test set size must be at least 1");
    }
}

} // namespace detail

/// Trains GAN-MDF `options.repeats` times (seed = base_seed + r) and records
/// the NRMSE of each run on fresh HF test points.
template <typename Source>
ExperimentResult run_experiment(Source const& source, std::size_t n_lf, std::size_t n_hf,
                                gan::TrainingConfig const& config, ExperimentOptions const& options)
{
    detail::check_options(options);
    config.validate();
    ExperimentResult result;
    result.benchmark = source_name(source);
    result.variant = config.supervised_trick ? "gan-mdf" : "pgan";
    result.n_lf = n_lf;
    result.n_hf = n_hf;
    result.runs.resize(options.repeats);
    detail::parallel_for(options.repeats, options.jobs, [&](std::size_t r) {
        auto& run = result.runs[r];
        run.seed = options.base_seed + r;
        const auto start = std::chrono::steady_clock::now();
        try {
            auto trial = draw_trial(source, n_lf, n_hf, run.seed, options);
            auto cfg = config;
            cfg.seed = run.seed;
            auto fitted = gan::fit(trial.dataset, cfg);
            run.lf_block_intact = fitted.lf_block_intact();
            run.nrmse = evaluate_nrmse(fitted.model, trial.test);
        } catch (std::exception const& e) {
            run.error = e.what();
        }
        run.wall_ms = detail::elapsed_ms(start);
    });
    detail::aggregate(result);
    return result;
}

/// One run_experiment per HF sample count.
template <typename Source>
std::vector<ExperimentResult> run_hf_sweep(Source const& source, std::size_t n_lf, std::span<const std::size_t> hf_grid,
                                           gan::TrainingConfig const& config, ExperimentOptions const& options)
{
    std::vector<ExperimentResult> out;
    for (auto n_hf : hf_grid) out.push_back(run_experiment(source, n_lf, n_hf, config, options));
    return out;
}

/// I_L in {100d, 80d, 60d, 40d, 20d}.
inline std::vector<std::size_t> default_lf_grid(std::size_t d1)
{
    return {100 * d1, 80 * d1, 60 * d1, 40 * d1, 20 * d1};
}

/// One run_experiment per LF sample count. Grid points share nothing, so
/// dropping one leaves the others unchanged.
template <typename Source>
std::vector<ExperimentResult> run_lf_sweep(Source const& source, std::span<const std::size_t> lf_grid,
                                           std::size_t n_hf, gan::TrainingConfig const& config,
                                           ExperimentOptions const& options)
{
    std::vector<ExperimentResult> out;
    for (auto n_lf : lf_grid) out.push_back(run_experiment(source, n_lf, n_hf, config, options));
    return out;
}

/// GAN-MDF, its pure-GAN ablation and an HF-only network, trained on the same
/// per-seed datasets and scored on the same test points. GAN-MDF and pGAN
/// share one LF-block pretraining per seed, which does not depend on the
/// supervised trick.
template <typename Source>
BaselineComparison run_baselines(Source const& source, std::size_t n_lf, std::size_t n_hf,
                                 gan::TrainingConfig const& config, ExperimentOptions const& options)
{
    detail::check_options(options);
    config.validate();
    BaselineComparison cmp;
    auto init = [&](ExperimentResult& r, char const* variant) {
        r.benchmark = source_name(source);
        r.variant = variant;
        r.n_lf = n_lf;
        r.n_hf = n_hf;
        r.runs.resize(options.repeats);
    };
    init(cmp.gan_mdf, "gan-mdf");
    init(cmp.pgan, "pgan");
    init(cmp.hf_only, "hf-only");

    detail::parallel_for(options.repeats, options.jobs, [&](std::size_t r) {
        const std::uint64_t seed = options.base_seed + r;
        auto& gan_run = cmp.gan_mdf.runs[r];
        auto& pgan_run = cmp.pgan.runs[r];
        auto& hf_run = cmp.hf_only.runs[r];
        gan_run.seed = pgan_run.seed = hf_run.seed = seed;

        std::optional<Trial> trial;
        try {
            trial = draw_trial(source, n_lf, n_hf, seed, options);
        } catch (std::exception const& e) {
            gan_run.error = pgan_run.error = hf_run.error = e.what();
            return;
        }

        auto with_trick = config;
        with_trick.seed = seed;
        with_trick.supervised_trick = true;
        auto without_trick = with_trick;
        without_trick.supervised_trick = false;

        double pretrain_ms = 0.0;
        std::optional<gan::GanMdfModel> pretrained;
        std::optional<gan::LfReport> lf_report;
        {
            const auto start = std::chrono::steady_clock::now();
            try {
                auto model = gan::prepare_model(trial->dataset, with_trick);
                const auto lf = gan::to_model_space(trial->dataset.lf, model.input_norm, model.lf_output_norm);
                lf_report = gan::pretrain_lf(model, lf, with_trick);
                pretrained = std::move(model);
            } catch (std::exception const& e) {
                gan_run.error = pgan_run.error = e.what();
            }
            pretrain_ms = detail::elapsed_ms(start);
        }
        auto adversarial = [&](RunRecord& run, gan::TrainingConfig const& cfg) {
            const auto start = std::chrono::steady_clock::now();
            if (pretrained) {
                try {
                    auto fitted = gan::finish_fit(*pretrained, *lf_report, trial->dataset, cfg);
                    run.lf_block_intact = fitted.lf_block_intact();
                    run.nrmse = evaluate_nrmse(fitted.model, trial->test);
                } catch (std::exception const& e) {
                    run.error = e.what();
                }
            }
            run.wall_ms = pretrain_ms + detail::elapsed_ms(start);
        };
        adversarial(gan_run, with_trick);
        adversarial(pgan_run, without_trick);

        const auto start = std::chrono::steady_clock::now();
        try {
            hf_run.nrmse = evaluate_nrmse(fit_hf_only(trial->dataset, with_trick), trial->test);
        } catch (std::exception const& e) {
            hf_run.error = e.what();
        }
        hf_run.wall_ms = detail::elapsed_ms(start);
    });
    detail::aggregate(cmp.gan_mdf);
    detail::aggregate(cmp.pgan);
    detail::aggregate(cmp.hf_only);
    return cmp;
}

/// Paired (LF, HF) responses at `n` Latin-hypercube points, one pair per
/// response component.
inline std::vector<std::pair<double, double>> emit_correlation_scatter(BenchmarkPair const& pair, std::size_t n,
                                                                       std::uint64_t seed = 0)
{
    if (n == 0) {
        throw InvalidArgument("scatter needs at least one point");
    }
    Rng rng = make_rng(seed, "scatter/design");
    std::vector<std::pair<double, double>> out;
    for (auto const& x : data::lhs_sample(n, pair.bounds, rng)) {
        const auto lo = pair.lf(x);
        const auto hi = pair.hf(x);
        for (std::size_t i = 0; i < std::min(lo.size(), hi.size()); ++i) out.emplace_back(lo[i], hi[i]);
    }
    return out;
}

} // namespace mdfgan::bench
