// mdfgan: train, evaluate and sweep GAN multi-fidelity surrogates from the
// command line. Run `mdfgan --help` for the subcommands.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "mdfgan/mdfgan.hpp"

namespace fs = std::filesystem;
using namespace mdfgan;

namespace {

constexpr int kExitDiverged = 1;
constexpr int kExitUsage = 2;

using Source = std::variant<bench::BenchmarkPair, data::CsvPairSource>;

struct Options {
    std::string benchmark;
    std::string csv_lf;
    std::string csv_hf;
    std::size_t d1 = 0;
    std::size_t d2 = 1;
    std::vector<std::size_t> il;
    std::vector<std::size_t> ih;
    std::size_t repeats = 10;
    std::size_t test_size = 1000;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string out = ".";
    bool nested = false;
    bool export_data = false;

    // Training overrides; applied only when given on the command line or in
    // the config file.
    double lr_lf = 0, lr_d = 0, lr_g = 0, lr_s = 0;
    std::size_t epochs_lf = 0, epochs_hf = 0, lf_batch_cap = 0, hf_batch_cap = 0;
    std::string mode;
    bool no_supervised = false;
    std::string normalizer;
    std::vector<std::size_t> hidden;
    std::vector<std::string> activations;

    // predict / scatter
    std::string model;
    std::string inputs;
    std::size_t points = 200;
};

struct Overrides {
    CLI::Option* lr_lf;
    CLI::Option* lr_d;
    CLI::Option* lr_g;
    CLI::Option* lr_s;
    CLI::Option* epochs_lf;
    CLI::Option* epochs_hf;
    CLI::Option* lf_batch_cap;
    CLI::Option* hf_batch_cap;
    CLI::Option* mode;
    CLI::Option* normalizer;
    CLI::Option* hidden;
    CLI::Option* activations;
};

struct UsageError : Error {
    using Error::Error;
};

Source resolve_source(Options const& o)
{
    const bool has_csv = !o.csv_lf.empty() || !o.csv_hf.empty();
    if (o.benchmark.empty() == !has_csv) {
        throw UsageError("give exactly one data source: --benchmark NAME or --csv-lf FILE --csv-hf FILE");
    }
    if (!o.benchmark.empty()) return bench::find_benchmark(o.benchmark);
    if (o.csv_lf.empty() || o.csv_hf.empty()) {
        throw UsageError("--csv-lf and --csv-hf must be given together");
    }
    if (o.d1 == 0) {
        throw UsageError("--d1 is required with CSV input");
    }
    return data::CsvPairSource::load(o.csv_lf, o.csv_hf, o.d1, o.d2);
}

gan::TrainingConfig resolve_config(Options const& o, Overrides const& set, Source const& source)
{
    auto c = std::holds_alternative<bench::BenchmarkPair>(source) ? std::get<bench::BenchmarkPair>(source).default_config
                                                                  : gan::TrainingConfig{};
    if (set.lr_lf->count()) c.lr_lf = o.lr_lf;
    if (set.lr_d->count()) c.lr_d = o.lr_d;
    if (set.lr_g->count()) c.lr_g = o.lr_g;
    if (set.lr_s->count()) c.lr_s = o.lr_s;
    if (set.epochs_lf->count()) c.epochs_lf = o.epochs_lf;
    if (set.epochs_hf->count()) c.epochs_hf = o.epochs_hf;
    if (set.lf_batch_cap->count()) c.lf_batch_cap = o.lf_batch_cap;
    if (set.hf_batch_cap->count()) c.hf_batch_cap = o.hf_batch_cap;
    if (set.mode->count()) c.mode = gan::parse_training_mode(o.mode);
    if (set.normalizer->count()) c.normalizer = data::parse_normalizer_kind(o.normalizer);
    if (set.hidden->count()) c.architecture.hidden = o.hidden;
    if (set.activations->count()) {
        c.architecture.activations.clear();
        for (auto const& a : o.activations) c.architecture.activations.push_back(nn::parse_activation(a));
    } else if (set.hidden->count() && c.architecture.activations.size() != c.architecture.hidden.size()) {
        c.architecture.activations.assign(c.architecture.hidden.size(), nn::ActivationKind::sigmoid());
    }
    if (o.no_supervised) c.supervised_trick = false;
    c.seed = o.seed;
    for (auto const& w : c.validate()) std::cerr << "warning: " << w << '\n';
    return c;
}

std::size_t source_d1(Source const& s)
{
    return std::visit([](auto const& src) { return src.d1; }, s);
}

std::size_t single(std::vector<std::size_t> const& v, std::size_t fallback, char const* flag)
{
    if (v.empty()) return fallback;
    if (v.size() != 1) {
        throw UsageError(std::string(flag) + " takes a single value for this subcommand");
    }
    return v.front();
}

fs::path prepare_out(Options const& o)
{
    fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw UsageError("cannot create output directory '" + o.out + "'");
    }
    return dir;
}

bench::ExperimentOptions experiment_options(Options const& o)
{
    bench::ExperimentOptions e;
    e.repeats = o.repeats;
    e.test_size = o.test_size;
    e.base_seed = o.seed;
    e.nested = o.nested;
    e.jobs = o.jobs;
    return e;
}

template <typename Fn>
fs::path write_artifact(fs::path const& path, Fn&& fn)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    fn(out);
    out.close();
    std::cout << "wrote " << path.string() << '\n';
    return path;
}

void print_result(bench::ExperimentResult const& r)
{
    std::cout << r.benchmark << ' ' << r.variant << " I_L=" << r.n_lf << " I_H=" << r.n_hf
              << " mean_nrmse=" << format_double(r.mean_nrmse) << " failed=" << r.failures() << '/' << r.runs.size()
              << '\n';
    for (auto const& run : r.runs) {
        if (!run.error.empty()) std::cerr << "  seed " << run.seed << ": " << run.error << '\n';
    }
}

int cmd_list_benchmarks()
{
    for (auto const& b : bench::registry()) {
        std::cout << b.name << " d1=" << b.d1 << " d2=" << b.d2 << "  " << b.description << '\n';
    }
    return 0;
}

int cmd_train(Options const& o, Overrides const& set)
{
    const auto source = resolve_source(o);
    const auto config = resolve_config(o, set, source);
    const auto dir = prepare_out(o);
    const auto d1 = source_d1(source);
    const std::size_t n_lf = single(o.il, 100 * d1, "--il");
    const std::size_t n_hf = single(o.ih, 5, "--ih");

    data::MultiFidelityDataset ds;
    std::vector<data::Sample> test;
    if (auto const* pair = std::get_if<bench::BenchmarkPair>(&source)) {
        ds = data::make_dataset(*pair, n_lf, n_hf, o.seed, {o.nested});
        test = data::make_test_set(*pair, o.test_size, o.seed);
    } else {
        if (o.nested) throw UsageError("--nested needs --benchmark");
        auto draw = data::make_dataset(std::get<data::CsvPairSource>(source), n_lf, n_hf, o.seed);
        ds = std::move(draw.dataset);
        test = std::move(draw.hf_holdout);
    }

    auto fitted = gan::fit(ds, config);
    for (auto const& w : fitted.warnings) std::cerr << "warning: " << w << '\n';

    gan::save_checkpoint(dir / "model.json", fitted.model, config);
    std::cout << "wrote " << (dir / "model.json").string() << '\n';
    write_artifact(dir / "loss_trace.csv",
                   [&](std::ostream& out) { gan::write_loss_trace(out, fitted.adversarial.trace); });
    if (o.export_data) {
        for (auto const& p : data::export_dataset(ds, dir)) std::cout << "wrote " << p.string() << '\n';
    }

    std::cout << "trained I_L=" << n_lf << " I_H=" << n_hf << " seed=" << o.seed
              << " lf_mse=" << format_double(fitted.lf_report.final_mse);
    if (!fitted.adversarial.trace.empty()) {
        std::cout << " L_S=" << format_double(fitted.adversarial.trace.back().supervised);
    }
    if (!test.empty()) std::cout << " nrmse=" << format_double(bench::evaluate_nrmse(fitted.model, test));
    std::cout << '\n';
    return 0;
}

int cmd_predict(Options const& o)
{
    if (o.model.empty() || o.inputs.empty()) {
        throw UsageError("predict needs --model FILE and --inputs FILE");
    }
    const auto dir = prepare_out(o);
    const auto ckpt = gan::load_checkpoint(o.model);
    const auto table = data::load_csv(o.inputs, ckpt.model.d1(), 0);
    std::vector<data::Point> xs;
    for (auto const& s : table.samples) xs.push_back(s.x);
    const auto ys = ckpt.model.predict(xs);
    std::vector<data::Sample> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({xs[i], ys[i]});
    write_artifact(dir / "predictions.csv", [&](std::ostream& out) { data::write_samples_csv(out, rows); });
    std::cout << "predicted " << rows.size() << " points\n";
    return 0;
}

int cmd_sweep(Options const& o, Overrides const& set, bool vary_hf)
{
    const auto source = resolve_source(o);
    const auto config = resolve_config(o, set, source);
    const auto dir = prepare_out(o);
    const auto d1 = source_d1(source);
    const auto opts = experiment_options(o);

    std::vector<bench::ExperimentResult> results;
    std::string stem;
    std::visit(
        [&](auto const& src) {
            if (vary_hf) {
                const std::size_t n_lf = single(o.il, 100 * d1, "--il");
                const auto grid = o.ih.empty() ? std::vector<std::size_t>{20, 15, 10, 5} : o.ih;
                results = bench::run_hf_sweep(src, n_lf, grid, config, opts);
                stem = "sweep_hf";
            } else {
                const std::size_t n_hf = single(o.ih, 5, "--ih");
                const auto grid = o.il.empty() ? bench::default_lf_grid(d1) : o.il;
                results = bench::run_lf_sweep(src, grid, n_hf, config, opts);
                stem = "sweep_lf";
            }
        },
        source);

    for (auto const& r : results) print_result(r);
    write_artifact(dir / (stem + "_runs.csv"), [&](std::ostream& out) { bench::write_runs_csv(out, results); });
    write_artifact(dir / (stem + "_summary.csv"), [&](std::ostream& out) { bench::write_summary_csv(out, results); });
    write_artifact(dir / (stem + "_summary.json"), [&](std::ostream& out) {
        out << bench::summary_json(results, vary_hf ? "varying-hf" : "varying-lf").dump(2) << '\n';
    });
    return 0;
}

int cmd_baselines(Options const& o, Overrides const& set)
{
    const auto source = resolve_source(o);
    const auto config = resolve_config(o, set, source);
    const auto dir = prepare_out(o);
    const auto d1 = source_d1(source);
    const std::size_t n_lf = single(o.il, 100 * d1, "--il");
    const std::size_t n_hf = single(o.ih, 5, "--ih");
    const auto cmp = std::visit(
        [&](auto const& src) { return bench::run_baselines(src, n_lf, n_hf, config, experiment_options(o)); }, source);

    for (auto const* r : {&cmp.gan_mdf, &cmp.pgan, &cmp.hf_only}) print_result(*r);
    write_artifact(dir / "baselines.csv", [&](std::ostream& out) { bench::write_baselines_csv(out, cmp); });
    write_artifact(dir / "baselines.json",
                   [&](std::ostream& out) { out << bench::baselines_json(cmp).dump(2) << '\n'; });
    return 0;
}

int cmd_scatter(Options const& o)
{
    if (o.benchmark.empty()) {
        throw UsageError("scatter needs --benchmark NAME");
    }
    const auto pair = bench::find_benchmark(o.benchmark);
    const auto dir = prepare_out(o);
    const auto points = bench::emit_correlation_scatter(pair, o.points, o.seed);
    write_artifact(dir / "scatter.csv", [&](std::ostream& out) { bench::write_scatter_csv(out, points); });
    std::cout << pair.name << ": " << points.size() << " (LF, HF) pairs\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"GAN multi-fidelity data fusion: training, prediction and benchmark sweeps"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key = value file with option defaults; flags on the command line win");
    app.allow_config_extras(CLI::config_extras_mode::error);

    Options o;
    if (char const* env = std::getenv("MDFGAN_SEED")) {
        if (auto v = parse_double(env); v && *v >= 0 && *v == static_cast<double>(static_cast<std::uint64_t>(*v))) {
            o.seed = static_cast<std::uint64_t>(*v);
        } else {
            std::cerr << "error: MDFGAN_SEED must be a non-negative integer\n";
            return kExitUsage;
        }
    }

    app.add_option("--benchmark", o.benchmark, "Built-in benchmark pair (see list-benchmarks)");
    app.add_option("--csv-lf", o.csv_lf, "LF samples: d1 input columns then d2 response columns");
    app.add_option("--csv-hf", o.csv_hf, "HF samples, same layout as --csv-lf");
    app.add_option("--d1", o.d1, "Input width of the CSV files");
    app.add_option("--d2", o.d2, "Response width of the CSV files")->capture_default_str();
    app.add_option("--il", o.il, "LF sample count(s), comma separated for sweep-lf")->delimiter(',');
    app.add_option("--ih", o.ih, "HF sample count(s), comma separated for sweep-hf")->delimiter(',');
    app.add_option("--repeats", o.repeats, "Repeats per grid point")->capture_default_str();
    app.add_option("--test-size", o.test_size, "HF test points per repeat")->capture_default_str();
    app.add_option("--seed", o.seed, "Base seed (default: $MDFGAN_SEED or 0)");
    app.add_option("--jobs", o.jobs, "Worker threads for repeats")->capture_default_str();
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_flag("--nested", o.nested, "Draw HF inputs from the LF design");
    app.add_flag("--export-data", o.export_data, "train: also write the sampled lf.csv/hf.csv");

    Overrides set{
        app.add_option("--lr-lf", o.lr_lf, "LF-block learning rate"),
        app.add_option("--lr-d", o.lr_d, "Discriminative-loss learning rate"),
        app.add_option("--lr-g", o.lr_g, "Generative-loss learning rate"),
        app.add_option("--lr-s", o.lr_s, "Supervised-loss learning rate"),
        app.add_option("--epochs-lf", o.epochs_lf, "LF pretraining epochs"),
        app.add_option("--epochs-hf", o.epochs_hf, "Adversarial epochs"),
        app.add_option("--lf-batch-cap", o.lf_batch_cap, "LF mini-batch cap"),
        app.add_option("--hf-batch-cap", o.hf_batch_cap, "HF mini-batch cap"),
        app.add_option("--mode", o.mode, "paper-faithful or standard-gan"),
        app.add_option("--normalizer", o.normalizer, "none, minmax or standard"),
        app.add_option("--hidden", o.hidden, "Hidden layer widths, comma separated")->delimiter(','),
        app.add_option("--activations", o.activations,
                       "Hidden activations, comma separated (sigmoid, ricker, dft, imq, identity, leaky_relu:A)")
            ->delimiter(','),
    };
    app.add_flag("--no-supervised", o.no_supervised, "Disable the supervised loss (pure-GAN ablation)");
    app.add_option("--model", o.model, "predict: checkpoint written by train");
    app.add_option("--inputs", o.inputs, "predict: CSV of d1 input columns");
    app.add_option("--points", o.points, "scatter: number of design points")->capture_default_str();

    auto* train = app.add_subcommand("train", "Fit one model and write model.json and loss_trace.csv");
    auto* predict = app.add_subcommand("predict", "Evaluate a saved model on a CSV of inputs");
    auto* sweep_hf = app.add_subcommand("sweep-hf", "Repeat training over a grid of HF sample counts");
    auto* sweep_lf = app.add_subcommand("sweep-lf", "Repeat training over a grid of LF sample counts");
    auto* baselines = app.add_subcommand("baselines", "Compare GAN-MDF, pGAN and an HF-only network");
    auto* scatter = app.add_subcommand("scatter", "Write paired LF/HF responses of a benchmark");
    auto* list = app.add_subcommand("list-benchmarks", "Print the built-in benchmark pairs");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*list) return cmd_list_benchmarks();
        if (*train) return cmd_train(o, set);
        if (*predict) return cmd_predict(o);
        if (*sweep_hf) return cmd_sweep(o, set, true);
        if (*sweep_lf) return cmd_sweep(o, set, false);
        if (*baselines) return cmd_baselines(o, set);
        if (*scatter) return cmd_scatter(o);
    } catch (DivergenceError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiverged;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
