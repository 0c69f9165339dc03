#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mdfgan/bench/baselines.hpp"
#include "mdfgan/bench/benchmarks.hpp"
#include "mdfgan/bench/experiment.hpp"
#include "mdfgan/bench/metrics.hpp"
#include "mdfgan/bench/report.hpp"

using namespace mdfgan;
using namespace mdfgan::bench;
using data::Point;

namespace {

gan::TrainingConfig quick(BenchmarkPair const& pair)
{
    auto c = pair.default_config;
    c.architecture.hidden = {8, 8};
    c.epochs_lf = 150;
    c.epochs_hf = 15;
    return c;
}

ExperimentOptions few(std::size_t repeats)
{
    ExperimentOptions o;
    o.repeats = repeats;
    o.test_size = 100;
    return o;
}

std::vector<std::string> lines(std::string const& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST(Registry, NamesAndShapes)
{
    const auto reg = registry();
    std::set<std::string> names;
    std::size_t last_d1 = 0;
    for (auto const& p : reg) {
        EXPECT_TRUE(names.insert(p.name).second) << p.name;
        EXPECT_EQ(p.bounds.size(), p.d1) << p.name;
        EXPECT_GE(p.d1, last_d1);
        last_d1 = p.d1;
        EXPECT_TRUE(p.default_config.validate().empty()) << p.name;
        const auto c = p.center();
        const auto lo = p.lf(c);
        const auto hi = p.hf(c);
        ASSERT_EQ(lo.size(), p.d2);
        ASSERT_EQ(hi.size(), p.d2);
        EXPECT_TRUE(std::isfinite(lo[0]) && std::isfinite(hi[0])) << p.name;
    }
    EXPECT_TRUE(names.count("forrester1d"));
    EXPECT_EQ(find_benchmark("currin2d").d1, 2u);
    EXPECT_THROW(find_benchmark("nope"), InvalidArgument);
}

TEST(Registry, KnownFunctionValues)
{
    auto hf = [](std::string const& name, Point const& x) { return find_benchmark(name).hf(x)[0]; };
    EXPECT_NEAR(hf("forrester1d", {1.0}), 15.829731945974109, 1e-12);
    EXPECT_NEAR(find_benchmark("forrester1d").lf(Point{0.5})[0], 0.5 * 0.9092974268256817 - 5.0, 1e-12);
    EXPECT_NEAR(hf("currin2d", {0.5, 0.5}), 7.40512391329881, 1e-12);
    EXPECT_NEAR(hf("hartmann6d", {0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573}), -3.32237, 1e-5);
    EXPECT_NEAR(hf("borehole8d", find_benchmark("borehole8d").center()), 70.87291263681894, 1e-10);
    EXPECT_NEAR(hf("separable20d", Point(20, 0.0)), 1.0, 1e-15);
}

TEST(Registry, ForresterFidelitiesDiffer)
{
    const auto p = find_benchmark("forrester1d");
    for (double x : {0.0, 0.25, 0.8}) EXPECT_NE(p.lf(Point{x}), p.hf(Point{x}));
}

TEST(Nrmse, HandValues)
{
    const std::vector<Point> truth{{3.0}, {4.0}};
    EXPECT_EQ(nrmse(truth, truth), 0.0);
    // err = sqrt(1 + 0) / sqrt(9 + 16)
    EXPECT_DOUBLE_EQ(nrmse(truth, std::vector<Point>{{2.0}, {4.0}}), 0.2);
    EXPECT_DOUBLE_EQ(nrmse(truth, std::vector<Point>{{0.0}, {0.0}}), 1.0);
    EXPECT_DOUBLE_EQ(nrmse(std::vector<Point>{{1.0, 1.0}}, std::vector<Point>{{1.0, 0.0}}), 1.0 / std::sqrt(2.0));
}

TEST(Nrmse, ScaleInvariantAndNonNegative)
{
    Rng rng{3};
    for (int t = 0; t < 50; ++t) {
        std::vector<Point> truth(10, Point(2)), pred(10, Point(2));
        for (std::size_t n = 0; n < 10; ++n) {
            for (std::size_t i = 0; i < 2; ++i) {
                truth[n][i] = uniform(rng, -5.0, 5.0);
                pred[n][i] = uniform(rng, -5.0, 5.0);
            }
        }
        const double base = nrmse(truth, pred);
        EXPECT_GE(base, 0.0);
        const double k = uniform(rng, 0.1, 50.0);
        auto st = truth, sp = pred;
        for (auto& r : st) for (auto& v : r) v *= k;
        for (auto& r : sp) for (auto& v : r) v *= k;
        EXPECT_NEAR(nrmse(st, sp), base, 1e-12);
    }
}

TEST(Nrmse, BadInputs)
{
    EXPECT_THROW(nrmse(std::vector<Point>{{0.0}}, std::vector<Point>{{1.0}}), InvalidArgument);
    EXPECT_THROW(nrmse(std::vector<Point>{}, std::vector<Point>{}), InvalidArgument);
    EXPECT_THROW(nrmse(std::vector<Point>{{1.0}}, std::vector<Point>{{1.0}, {2.0}}), InvalidArgument);
    EXPECT_THROW(nrmse(std::vector<Point>{{1.0}}, std::vector<Point>{{1.0, 2.0}}), ShapeError);
}

TEST(Experiment, DeterministicAndSeeded)
{
    const auto p = find_benchmark("forrester1d");
    auto opts = few(3);
    opts.base_seed = 40;
    const auto a = run_experiment(p, 30, 5, quick(p), opts);
    opts.jobs = 2;
    const auto b = run_experiment(p, 30, 5, quick(p), opts);
    ASSERT_EQ(a.runs.size(), 3u);
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_EQ(a.runs[r].seed, 40 + r);
        ASSERT_TRUE(a.runs[r].nrmse.has_value()) << a.runs[r].error;
        EXPECT_EQ(a.runs[r].nrmse, b.runs[r].nrmse);
        EXPECT_TRUE(a.runs[r].lf_block_intact);
    }
    EXPECT_EQ(a.mean_nrmse, b.mean_nrmse);
    EXPECT_FALSE(a.partial);
}

TEST(Experiment, MeanIsAverageOfRuns)
{
    const auto p = find_benchmark("forrester1d");
    const auto one = run_experiment(p, 30, 5, quick(p), few(1));
    ASSERT_TRUE(one.runs[0].nrmse.has_value());
    EXPECT_EQ(one.mean_nrmse, *one.runs[0].nrmse);

    const auto many = run_experiment(p, 30, 5, quick(p), few(4));
    const auto v = many.nrmse_values();
    ASSERT_EQ(v.size(), 4u);
    double sum = 0.0;
    for (double e : v) sum += e;
    EXPECT_NEAR(many.mean_nrmse, sum / 4.0, 1e-15);
    EXPECT_GE(many.mean_nrmse, *std::min_element(v.begin(), v.end()));
    EXPECT_LE(many.mean_nrmse, *std::max_element(v.begin(), v.end()));
}

TEST(Experiment, FailedRepeatsAreRecorded)
{
    const auto p = find_benchmark("forrester1d");
    // I_H > I_L cannot be drawn.
    const auto r = run_experiment(p, 3, 5, quick(p), few(2));
    EXPECT_EQ(r.failures(), 2u);
    EXPECT_TRUE(r.partial);
    EXPECT_TRUE(std::isnan(r.mean_nrmse));
    EXPECT_FALSE(r.runs[0].error.empty());
    EXPECT_THROW(run_experiment(p, 30, 5, quick(p), few(0)), InvalidArgument);
}

TEST(Experiment, LfSweepPointsAreIndependent)
{
    const auto p = find_benchmark("forrester1d");
    const std::vector<std::size_t> full{40, 20};
    const std::vector<std::size_t> part{20};
    const auto a = run_lf_sweep(p, full, 4, quick(p), few(2));
    const auto b = run_lf_sweep(p, part, 4, quick(p), few(2));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[1].n_lf, 20u);
    EXPECT_EQ(a[1].mean_nrmse, b[0].mean_nrmse);
    EXPECT_EQ(default_lf_grid(2), (std::vector<std::size_t>{200, 160, 120, 80, 40}));
}

TEST(Experiment, HfSweepOrderFollowsGrid)
{
    const auto p = find_benchmark("forrester1d");
    const std::vector<std::size_t> grid{6, 3};
    const auto r = run_hf_sweep(p, 30, grid, quick(p), few(1));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].n_hf, 6u);
    EXPECT_EQ(r[1].n_hf, 3u);
}

TEST(Baselines, ShareDataAndMatchStandaloneGanRun)
{
    const auto p = find_benchmark("forrester1d");
    const auto cmp = run_baselines(p, 30, 4, quick(p), few(2));
    const auto alone = run_experiment(p, 30, 4, quick(p), few(2));
    for (std::size_t r = 0; r < 2; ++r) {
        // The shared pretraining is the same computation fit() performs.
        EXPECT_EQ(cmp.gan_mdf.runs[r].nrmse, alone.runs[r].nrmse);
        EXPECT_TRUE(cmp.pgan.runs[r].nrmse.has_value()) << cmp.pgan.runs[r].error;
        EXPECT_TRUE(cmp.hf_only.runs[r].nrmse.has_value()) << cmp.hf_only.runs[r].error;
        EXPECT_EQ(cmp.gan_mdf.runs[r].seed, cmp.hf_only.runs[r].seed);
    }
    EXPECT_EQ(cmp.pgan.variant, "pgan");
    EXPECT_EQ(cmp.hf_only.variant, "hf-only");
}

TEST(Baselines, HfOnlyWithTwoPoints)
{
    const auto p = find_benchmark("forrester1d");
    const auto ds = data::make_dataset(p, 20, 2, 5);
    const auto m = fit_hf_only(ds, quick(p));
    const auto test = data::make_test_set(p, 50, 5);
    EXPECT_TRUE(std::isfinite(evaluate_nrmse(m, test)));
}

TEST(Scatter, RowsAndDiagonal)
{
    const auto p = find_benchmark("forrester1d");
    const auto pts = emit_correlation_scatter(p, 37, 1);
    EXPECT_EQ(pts.size(), 37u);
    EXPECT_EQ(pts, emit_correlation_scatter(p, 37, 1));

    BenchmarkPair same = p;
    same.lf = same.hf;
    for (auto const& [lo, hi] : emit_correlation_scatter(same, 20, 2)) EXPECT_EQ(lo, hi);
    EXPECT_THROW(emit_correlation_scatter(p, 0), InvalidArgument);
}

TEST(Report, RunsAndSummaryCsv)
{
    ExperimentResult r;
    r.benchmark = "toy";
    r.n_lf = 10;
    r.n_hf = 3;
    r.runs = {{0, 0.25, 12.3456789, "", true}, {1, std::nullopt, 1.0, "boom", true}};
    r.mean_nrmse = 0.25;
    r.partial = true;
    const std::vector<ExperimentResult> rs{r};

    std::ostringstream runs;
    write_runs_csv(runs, rs);
    EXPECT_EQ(lines(runs.str()), (std::vector<std::string>{"benchmark,I_L,I_H,seed,nrmse,wall_ms",
                                                            "toy,10,3,0,0.25,12.346", "toy,10,3,1,NaN,1"}));
    std::ostringstream summary;
    write_summary_csv(summary, rs);
    EXPECT_EQ(lines(summary.str()),
              (std::vector<std::string>{"benchmark,I_L,I_H,repeats,failed,mean_nrmse", "toy,10,3,2,1,0.25"}));

    const auto j = summary_json(rs, "hf-sweep");
    EXPECT_EQ(j["benchmark"], "toy");
    EXPECT_EQ(j["protocol"], "hf-sweep");
    ASSERT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["rows"][0]["mean_nrmse"], 0.25);
    EXPECT_TRUE(j["rows"][0]["per_seed"][1]["nrmse"].is_null());
    EXPECT_EQ(j["rows"][0]["failures"][0]["error"], "boom");
}

TEST(Report, BaselinesAndScatter)
{
    BaselineComparison cmp;
    for (auto* r : {&cmp.gan_mdf, &cmp.pgan, &cmp.hf_only}) {
        r->benchmark = "toy";
        r->n_lf = 10;
        r->n_hf = 2;
        r->runs = {{7, 0.5, 2.0, "", true}};
        r->mean_nrmse = 0.5;
    }
    cmp.pgan.variant = "pgan";
    cmp.hf_only.variant = "hf-only";
    std::ostringstream out;
    write_baselines_csv(out, cmp);
    const auto l = lines(out.str());
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "variant,benchmark,I_L,I_H,seed,nrmse,wall_ms");
    EXPECT_EQ(l[3], "hf-only,toy,10,2,7,0.5,2");
    EXPECT_EQ(baselines_json(cmp)["mean_nrmse"]["pgan"], 0.5);

    std::ostringstream sc;
    const std::vector<std::pair<double, double>> pts{{1.5, -2.0}};
    write_scatter_csv(sc, pts);
    EXPECT_EQ(sc.str(), "y_lf,y_hf\n1.5,-2\n");
}
