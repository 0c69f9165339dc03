// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.
// Usage: acceptance <path to the mdfgan CLI>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mdfgan/mdfgan.hpp"
#include "support/gradient_check.hpp"
#include "support/iteration_oracle.hpp"
#include "support/oracles.hpp"

using namespace mdfgan;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, std::string const& detail)
{
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

void gradient_oracle()
{
    const auto start = std::chrono::steady_clock::now();
    const std::vector<nn::ActivationKind> kinds{nn::ActivationKind::sigmoid(), nn::ActivationKind::leaky_relu(),
                                                nn::ActivationKind::ricker(), nn::ActivationKind::dft(),
                                                nn::ActivationKind::inverse_multiquadratic()};
    double worst = 0.0;
    std::string detail;
    for (auto const& k : kinds) {
        const double e = oracle::gradient_sweep(k, 20, 2024);
        worst = std::max(worst, e);
        detail += std::string(nn::tag_name(k.tag)) + "=" + fmt(e) + " ";
    }
    const double t = seconds_since(start);
    report(1, worst < 1e-4 && t < 30.0, detail + "max=" + fmt(worst) + " time=" + fmt(t) + "s");
}

void metric_anchors()
{
    Rng rng{99};
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<data::Point> y(25, data::Point(2));
        for (auto& r : y) {
            for (auto& v : r) v = uniform(rng, 0.1, 10.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        }
        const std::vector<data::Point> zero(25, data::Point(2, 0.0));
        ok = ok && std::abs(bench::nrmse(y, y)) <= 1e-12 && std::abs(bench::nrmse(y, zero) - 1.0) <= 1e-12;
    }
    const std::vector<data::Point> col{{1.0}, {2.0}, {3.0}};
    const auto mm = data::fit_normalizer(data::NormalizerKind::MinMax, col);
    const double z0 = mm.transform(col[0])[0], z1 = mm.transform(col[1])[0], z2 = mm.transform(col[2])[0];
    ok = ok && std::abs(z0) <= 1e-12 && std::abs(z1 - 0.5) <= 1e-12 && std::abs(z2 - 1.0) <= 1e-12;
    const double s0 = nn::activation_apply(nn::ActivationKind::sigmoid(), std::vector{0.0})[0];
    ok = ok && s0 == 0.5;
    report(2, ok, "minmax=[" + fmt(z0) + "," + fmt(z1) + "," + fmt(z2) + "] sigmoid(0)=" + fmt(s0));
}

void lhs_strata()
{
    bool ok = true;
    std::size_t designs = 0;
    for (std::size_t n : {1u, 4u, 100u}) {
        for (std::size_t d : {1u, 6u}) {
            std::vector<data::Bound> bounds;
            for (std::size_t j = 0; j < d; ++j) bounds.push_back({-2.0 + j, 1.0 + 2.0 * j});
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto pts = data::lhs_sample(n, bounds, seed);
                ++designs;
                ok = ok && pts.size() == n;
                for (std::size_t j = 0; j < d; ++j) {
                    std::vector<int> counts(n, 0);
                    for (auto const& p : pts) {
                        const double u = (p[j] - bounds[j].lo) / (bounds[j].hi - bounds[j].lo);
                        if (u < 0.0 || u > 1.0) {
                            ok = false;
                            continue;
                        }
                        ++counts[std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)))];
                    }
                    for (int c : counts) ok = ok && c == 1;
                }
            }
        }
    }
    report(3, ok, std::to_string(designs) + " designs checked");
}

void iteration_fidelity()
{
    gan::TrainingConfig cfg;
    cfg.architecture.hidden = {4, 3};
    double worst = 0.0;
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        cfg.seed = seed;
        auto model = gan::GanMdfModel::create(1, 1, cfg);
        model.lf_block.freeze();
        const std::vector<data::Sample> batch{{{0.2}, {0.7}}, {{0.9}, {-0.3}}};
        const auto expected = oracle::script_faithful_iteration(model, batch, cfg);
        auto states = gan::OptimizerStates::create(model);
        gan::adversarial_iteration(model, states, batch, cfg, 1);
        const auto hf = oracle::flat(model.hf_block);
        const auto d = oracle::flat(model.discriminator);
        if (hf.size() != expected.hf_params.size() || d.size() != expected.disc_params.size()) {
            worst = INFINITY;
            break;
        }
        for (std::size_t i = 0; i < hf.size(); ++i) worst = std::max(worst, std::abs(hf[i] - expected.hf_params[i]));
        for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, std::abs(d[i] - expected.disc_params[i]));
    }
    report(4, worst <= 1e-10, "max parameter deviation=" + fmt(worst));
}

bool intact(bench::ExperimentResult const& r)
{
    return r.all_lf_blocks_intact() && r.failures() == 0;
}

/// Criteria 5-7; returns the criterion 9 verdict and detail for those runs.
std::pair<bool, std::string> training_criteria()
{
    const auto pair = bench::find_benchmark("forrester1d");
    const auto cfg = pair.default_config;
    bench::ExperimentOptions opts;
    opts.repeats = 10;
    bool all_intact = true;
    std::size_t runs = 0;
    auto track = [&](bench::ExperimentResult const& r) {
        all_intact = all_intact && intact(r);
        runs += r.runs.size();
    };

    auto start = std::chrono::steady_clock::now();
    const auto cmp = bench::run_baselines(pair, 100, 5, cfg, opts);
    track(cmp.gan_mdf);
    track(cmp.pgan);
    const double gan5 = cmp.gan_mdf.mean_nrmse;
    const double t5 = seconds_since(start);
    report(5, gan5 < cmp.pgan.mean_nrmse && gan5 < cmp.hf_only.mean_nrmse && t5 < 300.0,
           "gan-mdf=" + fmt(gan5) + " pgan=" + fmt(cmp.pgan.mean_nrmse) + " hf-only=" + fmt(cmp.hf_only.mean_nrmse) +
               " time=" + fmt(t5) + "s");

    start = std::chrono::steady_clock::now();
    const auto two = bench::run_experiment(pair, 100, 2, cfg, opts);
    track(two);
    const double t6 = seconds_since(start);
    report(6, two.mean_nrmse < 2.5 * gan5 && t6 < 600.0,
           "I_H=2 " + fmt(two.mean_nrmse) + " vs I_H=5 " + fmt(gan5) + " ratio=" + fmt(two.mean_nrmse / gan5) +
               " limit=2.5 time=" + fmt(t6) + "s");

    start = std::chrono::steady_clock::now();
    const std::vector<std::size_t> grid{100, 60, 20};
    const auto sweep = bench::run_lf_sweep(pair, grid, 5, cfg, opts);
    double lo = INFINITY, hi = 0.0;
    std::string detail;
    for (auto const& r : sweep) {
        track(r);
        lo = std::min(lo, r.mean_nrmse);
        hi = std::max(hi, r.mean_nrmse);
        detail += "I_L=" + std::to_string(r.n_lf) + ":" + fmt(r.mean_nrmse) + " ";
    }
    const double t7 = seconds_since(start);
    report(7, std::isfinite(hi) && hi < 2.0 * lo && t7 < 600.0,
           detail + "max/min=" + fmt(hi / lo) + " time=" + fmt(t7) + "s");

    return {all_intact, std::to_string(runs) + " adversarial runs, LF checksum unchanged in all: " +
                            (all_intact ? "yes" : "no")};
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string without_wall_clock(std::string const& csv)
{
    std::istringstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

void determinism(std::string const& cli)
{
    if (cli.empty()) {
        report(8, false, "no CLI path given");
        return;
    }
    oracle::TempDir dir("acceptance");
    const std::string args = " sweep-hf --benchmark forrester1d --il 100 --ih 5,2 --repeats 2 --seed 17 --out ";
    bool ran = true;
    for (auto const* sub : {"a", "b"}) {
        const std::string cmd = "\"" + cli + "\"" + args + "\"" + (dir / sub).string() + "\" > /dev/null";
        ran = ran && std::system(cmd.c_str()) == 0;
    }
    if (!ran) {
        report(8, false, "sweep-hf exited with an error");
        return;
    }
    const auto runs_a = slurp(dir / "a" / "sweep_hf_runs.csv");
    const bool same = !runs_a.empty() && without_wall_clock(runs_a) == without_wall_clock(slurp(dir / "b" / "sweep_hf_runs.csv")) &&
                      slurp(dir / "a" / "sweep_hf_summary.csv") == slurp(dir / "b" / "sweep_hf_summary.csv");
    report(8, same, "sweep_hf_runs.csv (minus wall_ms) and sweep_hf_summary.csv identical across two runs");
}

} // namespace

int main(int argc, char** argv)
{
    const std::string cli = argc > 1 ? argv[1] : "";
    try {
        gradient_oracle();
        metric_anchors();
        lhs_strata();
        iteration_fidelity();
        const auto [frozen_ok, frozen_detail] = training_criteria();
        determinism(cli);
        report(9, frozen_ok, frozen_detail);
    } catch (std::exception const& e) {
        std::cout << "acceptance aborted: " << e.what() << std::endl;
        return 2;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
