#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "mdfgan/data/csv.hpp"
#include "mdfgan/data/dataset.hpp"
#include "mdfgan/data/lhs.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "support/oracles.hpp"

using namespace mdfgan;
using namespace mdfgan::data;

namespace {

// Counts points per stratum from scratch rather than through stratum_of().
std::vector<int> stratum_counts(std::vector<Point> const& pts, std::size_t dim, Bound b)
{
    const std::size_t n = pts.size();
    std::vector<int> counts(n, 0);
    for (auto const& p : pts) {
        const double u = (p[dim] - b.lo) / (b.hi - b.lo);
        EXPECT_GE(u, 0.0);
        EXPECT_LE(u, 1.0);
        auto k = static_cast<std::size_t>(u * static_cast<double>(n));
        if (k == n) k = n - 1;
        ++counts[k];
    }
    return counts;
}

struct Toy {
    std::size_t d1 = 2;
    std::size_t d2 = 1;
    std::vector<Bound> bounds{{0.0, 1.0}, {-2.0, 2.0}};
    Point lf(std::span<const double> x) const { return {x[0] + x[1]}; }
    Point hf(std::span<const double> x) const { return {2.0 * x[0] - x[1]}; }
};

CsvTable parse(std::string const& text, std::size_t d1 = 1, std::size_t d2 = 1)
{
    std::istringstream in(text);
    return parse_csv(in, d1, d2, "t.csv");
}

} // namespace

TEST(Lhs, EveryStratumHoldsOnePoint)
{
    for (std::size_t n : {1u, 4u, 100u}) {
        for (std::size_t d : {1u, 6u}) {
            std::vector<Bound> bounds;
            for (std::size_t j = 0; j < d; ++j) bounds.push_back({-1.0 - j, 3.0 + 0.5 * j});
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto pts = lhs_sample(n, bounds, seed);
                ASSERT_EQ(pts.size(), n);
                for (std::size_t j = 0; j < d; ++j) {
                    for (int c : stratum_counts(pts, j, bounds[j])) EXPECT_EQ(c, 1) << "n=" << n << " d=" << d;
                }
            }
        }
    }
}

TEST(Lhs, SeedDeterminesDesign)
{
    const std::vector<Bound> b{{0, 1}, {0, 1}};
    EXPECT_EQ(lhs_sample(10, b, 3), lhs_sample(10, b, 3));
    EXPECT_NE(lhs_sample(10, b, 3), lhs_sample(10, b, 4));
}

TEST(Lhs, TinyStrataStayInsideTheirCell)
{
    // Very narrow box: rounding pressure at stratum edges.
    const std::vector<Bound> b{{1.0, 1.0 + 1e-12}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (int c : stratum_counts(lhs_sample(64, b, seed), 0, b[0])) EXPECT_EQ(c, 1);
    }
}

TEST(Lhs, RejectsBadArguments)
{
    const std::vector<Bound> ok{{0, 1}};
    EXPECT_THROW(lhs_sample(0, ok, 1), InvalidArgument);
    EXPECT_THROW(lhs_sample(3, std::vector<Bound>{}, 1), InvalidArgument);
    EXPECT_THROW(lhs_sample(3, std::vector<Bound>{{1, 1}}, 1), InvalidArgument);
    EXPECT_THROW(lhs_sample(3, std::vector<Bound>{{2, 1}}, 1), InvalidArgument);
}

TEST(Normalizer, MinMaxOfOneTwoThree)
{
    const std::vector<Point> rows{{1.0}, {2.0}, {3.0}};
    const auto n = fit_normalizer(NormalizerKind::MinMax, rows);
    EXPECT_NEAR(n.transform(rows[0])[0], 0.0, 1e-15);
    EXPECT_NEAR(n.transform(rows[1])[0], 0.5, 1e-15);
    EXPECT_NEAR(n.transform(rows[2])[0], 1.0, 1e-15);
}

TEST(Normalizer, StandardUsesPopulationStdev)
{
    const std::vector<Point> rows{{1.0}, {2.0}, {3.0}};
    const auto n = fit_normalizer(NormalizerKind::Standard, rows);
    EXPECT_NEAR(n.scales()[0], std::sqrt(2.0 / 3.0), 1e-15);
    EXPECT_NEAR(n.transform(rows[2])[0], 1.0 / std::sqrt(2.0 / 3.0), 1e-12);
}

TEST(Normalizer, FittedPropertiesOnRandomData)
{
    Rng rng{21};
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t rows_n = 2 + uniform_index(rng, 40);
        const std::size_t d = 1 + uniform_index(rng, 4);
        std::vector<Point> rows(rows_n, Point(d));
        for (auto& r : rows) {
            for (auto& v : r) v = uniform(rng, -100, 100);
        }
        const auto mm = fit_normalizer(NormalizerKind::MinMax, rows);
        const auto st = fit_normalizer(NormalizerKind::Standard, rows);
        std::vector<double> mean(d, 0.0);
        for (auto const& r : rows) {
            const auto z = mm.transform(r);
            for (std::size_t j = 0; j < d; ++j) {
                EXPECT_GE(z[j], -1e-15);
                EXPECT_LE(z[j], 1.0 + 1e-15);
            }
            const auto s = st.transform(r);
            for (std::size_t j = 0; j < d; ++j) mean[j] += s[j] / static_cast<double>(rows_n);
            for (auto const* n : {&mm, &st}) {
                const auto back = n->inverse_transform(n->transform(r));
                for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(back[j], r[j], 1e-10);
            }
        }
        for (double m : mean) EXPECT_LT(std::abs(m), 1e-10);
    }
}

TEST(Normalizer, ConstantColumnPassesThroughWithWarning)
{
    const std::vector<Point> rows{{5.0, 1.0}, {5.0, 2.0}};
    for (auto kind : {NormalizerKind::MinMax, NormalizerKind::Standard}) {
        const auto n = fit_normalizer(kind, rows);
        EXPECT_EQ(n.warnings().size(), 1u);
        EXPECT_DOUBLE_EQ(n.transform(rows[0])[0], 5.0);
    }
}

TEST(Normalizer, ErrorsAndIdentity)
{
    EXPECT_THROW(fit_normalizer(NormalizerKind::MinMax, std::vector<Point>{}), InvalidArgument);
    EXPECT_THROW(fit_normalizer(NormalizerKind::Standard, std::vector<Point>{{1.0}}), InvalidArgument);
    EXPECT_THROW(fit_normalizer(NormalizerKind::MinMax, std::vector<Point>{{1.0}, {1.0, 2.0}}), ShapeError);
    const auto none = fit_normalizer(NormalizerKind::None, std::vector<Point>{{3.0}, {7.0}});
    EXPECT_EQ(none.transform(std::vector{4.5})[0], 4.5);
    EXPECT_THROW(none.transform(std::vector{1.0, 2.0}), ShapeError);
}

TEST(Normalizer, JsonRoundTrip)
{
    const auto n = fit_normalizer(NormalizerKind::Standard, std::vector<Point>{{1.0, 4.0}, {2.0, 4.0}, {4.0, 4.0}});
    const auto back = Normalizer::from_json(nlohmann::json::parse(n.to_json().dump()));
    EXPECT_EQ(back.kind(), n.kind());
    EXPECT_EQ(std::vector(back.offsets().begin(), back.offsets().end()),
              std::vector(n.offsets().begin(), n.offsets().end()));
    EXPECT_EQ(std::vector(back.scales().begin(), back.scales().end()),
              std::vector(n.scales().begin(), n.scales().end()));
    EXPECT_EQ(parse_normalizer_kind("min-max"), NormalizerKind::MinMax);
    EXPECT_THROW(parse_normalizer_kind("robust"), InvalidArgument);
}

TEST(Csv, HeaderAndDataRows)
{
    const auto t = parse("x,y\n0.5,1.25\n\n1e-3, -2\n");
    EXPECT_TRUE(t.had_header);
    ASSERT_EQ(t.rows, 2u);
    EXPECT_EQ(t.samples[1].x, Point{1e-3});
    EXPECT_EQ(t.samples[1].y, Point{-2.0});
}

TEST(Csv, NumericFirstLineIsData)
{
    const auto t = parse("0.5,1\n2,3\n");
    EXPECT_FALSE(t.had_header);
    EXPECT_EQ(t.rows, 2u);
}

TEST(Csv, LoneTextLineIsAnError)
{
    try {
        parse("a,b\n");
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(Csv, ArityErrorReportsLine)
{
    try {
        parse("x,y\n1,2\n3\n", 1, 1);
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("t.csv:3"), std::string::npos);
    }
}

TEST(Csv, BadNumberReportsLine)
{
    try {
        parse("1,2\n3,abc\n");
        FAIL();
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse("1,nan\n"), ParseError);
}

TEST(Csv, EmptyInputWarns)
{
    const auto t = parse("");
    EXPECT_EQ(t.rows, 0u);
    EXPECT_EQ(t.warnings.size(), 1u);
}

TEST(Csv, InputOnlyFiles)
{
    std::istringstream in("x1,x2\n1,2\n3,4\n");
    const auto t = parse_csv(in, 2, 0);
    ASSERT_EQ(t.rows, 2u);
    EXPECT_TRUE(t.samples[0].y.empty());
}

TEST(Csv, MissingFileIsIoError)
{
    EXPECT_THROW(load_csv("/nonexistent/definitely_missing.csv", 1, 1), IoError);
}

TEST(Csv, WriteThenReadIsExact)
{
    Rng rng{2};
    std::vector<Sample> samples;
    for (int i = 0; i < 20; ++i) samples.push_back({{uniform(rng, -1, 1), uniform(rng, -1e6, 1e6)}, {uniform(rng, 0, 1e-9)}});
    std::ostringstream out;
    write_samples_csv(out, samples);
    std::istringstream in(out.str());
    const auto back = parse_csv(in, 2, 1);
    ASSERT_EQ(back.rows, samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].x, samples[i].x);
        EXPECT_EQ(back.samples[i].y, samples[i].y);
    }
}

TEST(Dataset, SizesBoundsAndResponses)
{
    const Toy toy;
    const auto ds = make_dataset(toy, 100, 5, 7);
    EXPECT_EQ(ds.lf.size(), 100u);
    EXPECT_EQ(ds.hf.size(), 5u);
    for (auto const* set : {&ds.lf, &ds.hf}) {
        for (auto const& s : *set) {
            for (std::size_t j = 0; j < 2; ++j) {
                EXPECT_GE(s.x[j], toy.bounds[j].lo);
                EXPECT_LE(s.x[j], toy.bounds[j].hi);
            }
        }
    }
    for (auto const& s : ds.hf) EXPECT_DOUBLE_EQ(s.y[0], 2.0 * s.x[0] - s.x[1]);
    EXPECT_EQ(make_dataset(toy, 100, 5, 7), ds);
    EXPECT_NE(make_dataset(toy, 100, 5, 8), ds);
}

TEST(Dataset, EqualCountsAreAllowed)
{
    EXPECT_EQ(make_dataset(Toy{}, 3, 3, 1).hf.size(), 3u);
}

TEST(Dataset, NestedHfInputsComeFromLfDesign)
{
    const auto ds = make_dataset(Toy{}, 30, 6, 2, {true});
    std::set<Point> lf_x;
    for (auto const& s : ds.lf) lf_x.insert(s.x);
    for (auto const& s : ds.hf) EXPECT_TRUE(lf_x.count(s.x));
    EXPECT_TRUE(ds.nested);
}

TEST(Dataset, RejectsBadCounts)
{
    EXPECT_THROW(make_dataset(Toy{}, 4, 5, 1), InvalidArgument);
    EXPECT_THROW(make_dataset(Toy{}, 4, 0, 1), InvalidArgument);
}

TEST(Dataset, CsvSubsamplingAndHoldout)
{
    oracle::TempDir dir("csv");
    {
        std::ofstream lf(dir / "lf.csv");
        lf << "x,y\n";
        for (int i = 0; i < 50; ++i) lf << i * 0.02 << ',' << i << '\n';
        std::ofstream hf(dir / "hf.csv");
        for (int i = 0; i < 12; ++i) hf << i * 0.08 << ',' << -i << '\n';
    }
    const auto src = CsvPairSource::load(dir / "lf.csv", dir / "hf.csv", 1, 1);
    const auto draw = make_dataset(src, 20, 5, 3);
    EXPECT_EQ(draw.dataset.lf.size(), 20u);
    EXPECT_EQ(draw.dataset.hf.size(), 5u);
    EXPECT_EQ(draw.hf_holdout.size(), 7u);
    std::set<Point> seen;
    for (auto const& s : draw.dataset.lf) EXPECT_TRUE(seen.insert(s.x).second);
    EXPECT_THROW(make_dataset(src, 60, 5, 3), InvalidArgument);
    EXPECT_THROW(CsvPairSource::load(dir / "missing.csv", dir / "hf.csv", 1, 1), IoError);
}

TEST(Dataset, ExportWritesFilesThatReload)
{
    oracle::TempDir dir("export");
    const auto ds = make_dataset(Toy{}, 10, 3, 4);
    const auto paths = export_dataset(ds, dir.path());
    ASSERT_EQ(paths.size(), 3u);
    for (auto const& p : paths) EXPECT_TRUE(std::filesystem::exists(p));
    const auto lf = load_csv(paths[0], 2, 1);
    ASSERT_EQ(lf.rows, 10u);
    EXPECT_EQ(lf.samples[0].x, ds.lf[0].x);
    std::ifstream meta(paths[2]);
    const auto j = nlohmann::json::parse(meta);
    EXPECT_EQ(j.at("I_H").get<int>(), 3);
}
