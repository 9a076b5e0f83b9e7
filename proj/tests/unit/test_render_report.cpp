#include "test_support.hpp"

#include <cmtest/errors.hpp>
#include <cmtest/render.hpp>
#include <cmtest/report.hpp>
#include <cmtest/testfields.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

using namespace cmtest;
using cmtest::testing::TempDir;
using cmtest::testing::field_from;

namespace {

ColormapSpec twin_map()
{
    return ColormapSpec({ColormapKey::single(-63, Color::srgb(0.23, 0.30, 0.75)),
                         ColormapKey::twin(0, Color::srgb(0.75, 0.85, 1.0), Color::srgb(1, 1, 1)),
                         ColormapKey::single(53, Color::srgb(0.71, 0.02, 0.15))});
}

bool is_uniform(const Image& img)
{
    for (std::size_t p = 3; p < img.rgb.size(); ++p)
        if (img.rgb[p] != img.rgb[p % 3]) return false;
    return true;
}

} // namespace

TEST(RenderField, ConstantFieldIsUniform)
{
    const Image img = render_field(field_from(9, 5, std::vector<double>(45, 0.3)), twin_map());
    EXPECT_EQ(img.width, 9u);
    EXPECT_EQ(img.height, 5u);
    EXPECT_TRUE(is_uniform(img));
}

TEST(RenderField, GradientRowsAreMonotoneGray)
{
    const ScalarField g = gen_gradient(0, 1, 1, Shape::Linear, Shape::Linear, {64, 32});
    const auto [lo, hi] = g.value_range();
    const Image img = render_field(g, grayscale_uniform(lo, hi));
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.pixel(x, y);
            EXPECT_EQ(p[0], p[1]);
            EXPECT_EQ(p[1], p[2]);
            if (x > 0) EXPECT_GE(p[0], img.pixel(x - 1, y)[0]);
        }
    }
    EXPECT_LT(img.pixel(0, 0)[0], img.pixel(63, 0)[0]);
}

TEST(RenderField, TopRowShowsUpperEdge)
{
    const ScalarField f = field_from(1, 2, {0.0, 1.0});
    const Image img = render_field(f, grayscale_uniform(0, 1));
    EXPECT_EQ(img.pixel(0, 0)[0], 255);
    EXPECT_EQ(img.pixel(0, 1)[0], 0);
}

TEST(RenderField, Deterministic)
{
    const ScalarField f = gen_collection(CollectionId::Mandelbrot, {80, 60});
    const auto [lo, hi] = f.value_range();
    const ColormapSpec cmap({ColormapKey::single(lo, Color::srgb(0, 0, 0.3)),
                             ColormapKey::single(hi, Color::srgb(1, 0.9, 0.2))},
                            ColorSpace::DIN99);
    EXPECT_EQ(encode_png(render_field(f, cmap)), encode_png(render_field(f, cmap)));
}

TEST(Panels, UniformBundleSubtractionIsWhite)
{
    const ScalarField g = gen_gradient(0, 1, 1, Shape::Convex, Shape::Linear, {48, 48});
    const auto [lo, hi] = g.value_range();
    EvaluationOptions opts;
    opts.metric = DifferenceMetric::LabEuclidean;
    const EvaluationBundle b = evaluate(g, grayscale_uniform(lo, hi), opts);
    for (Aggregation how : {Aggregation::Max, Aggregation::Average, Aggregation::Median}) {
        const Image s = render_panel(b, Panel::Subtraction, how);
        for (std::uint8_t c : s.rgb) ASSERT_GE(c, 254);
    }
}

TEST(Panels, ZeroValueFieldIsWhite)
{
    const EvaluationBundle b = evaluate(field_from(6, 6, std::vector<double>(36, 2.0)), twin_map(), {});
    const Image v = render_panel(b, Panel::Value, Aggregation::Max);
    for (std::uint8_t c : v.rgb) EXPECT_EQ(c, 255);
}

TEST(Panels, TwinKeyDrawsRedLineAtThreshold)
{
    const ScalarField g = gen_threshold(-63, 53, 0, ThresholdType::Flat, 2, {60, 20});
    EvaluationOptions opts;
    opts.normalization = Normalization::black_white();
    const EvaluationBundle b = evaluate(g, twin_map(), opts);
    const Image s = render_panel(b, Panel::Subtraction, Aggregation::Max);
    // Columns whose pixels straddle the sign change of the field.
    std::vector<std::size_t> edge;
    for (std::size_t i = 0; i + 1 < 60; ++i)
        if ((g.at(i, 10) < 0) != (g.at(i + 1, 10) < 0)) edge = {i, i + 1};
    ASSERT_EQ(edge.size(), 2u);
    auto redness = [&](std::size_t x) {
        int r = 0;
        for (std::size_t y = 0; y < s.height; ++y) r += s.pixel(x, y)[0] - s.pixel(x, y)[2];
        return r / static_cast<int>(s.height);
    };
    for (std::size_t x = 0; x < 60; ++x) {
        if (x == edge[0] || x == edge[1]) EXPECT_GT(redness(x), 20) << x;
        else EXPECT_LT(redness(x), redness(edge[0])) << x;
    }
}

TEST(Panels, RenderingTwiceIsByteIdentical)
{
    const EvaluationBundle b = evaluate(gen_collection(CollectionId::Bukin6, {40, 30}), twin_map(), {});
    const PanelSet a = render_evaluation(b, Aggregation::Median);
    const PanelSet c = render_evaluation(b, Aggregation::Median);
    for (Panel p : kAllPanels) {
        EXPECT_EQ(encode_png(a.get(p)), encode_png(c.get(p)));
        EXPECT_EQ(a.get(p).width, 40u);
    }
    EXPECT_EQ(a.mapped, render_field(b.source, b.colormap));
}

TEST(Panels, NamesRoundTrip)
{
    for (Panel p : kAllPanels) EXPECT_EQ(parse_panel(to_string(p)), p);
    EXPECT_THROW(parse_panel("heightmap"), UnknownNameError);
}

TEST(Ramps, Endpoints)
{
    const Color w = to_displayable_srgb(difference_ramp().sample(0));
    const Color k = to_displayable_srgb(difference_ramp().sample(1));
    EXPECT_NEAR(w.c1, 1.0, 1e-6);
    EXPECT_NEAR(k.c1, 0.0, 1e-6);
    const Color neg = to_displayable_srgb(subtraction_diverging().sample(-1));
    const Color mid = to_displayable_srgb(subtraction_diverging().sample(0));
    const Color pos = to_displayable_srgb(subtraction_diverging().sample(1));
    EXPECT_GT(neg.c1, neg.c3);
    EXPECT_GT(pos.c3, pos.c1);
    EXPECT_NEAR(mid.c1, 1.0, 1e-6);
    EXPECT_NEAR(mid.c3, 1.0, 1e-6);
}

TEST(Report, WritesAllFiles)
{
    TempDir dir;
    TestSpec spec;
    spec.function = FunctionId::Threshold;
    spec.resolution = {24, 24};
    const EvaluationBundle b = evaluate(generate(spec).field, twin_map(), {}, spec);
    write_report(b, dir / "r");
    for (const char* name : {"value.csv", "color.csv", "subtraction.csv", "value.png", "color.png", "subtraction.png",
                             "grayscale.png", "mapped.png", "statistics.json", "provenance.json", "colormap.json"})
        EXPECT_TRUE(std::filesystem::exists(dir / "r" / name)) << name;
    const nlohmann::json r = read_report(dir / "r");
    EXPECT_EQ(r["statistics"], statistics_json(b));
    EXPECT_EQ(r["provenance"]["test_spec"], to_json(spec));
    EXPECT_EQ(r["provenance"]["test_spec_sha256"], sha256_hex(to_json(spec).dump()));
    EXPECT_EQ(r["provenance"]["colormap_sha256"], sha256_hex(read_file(dir / "r" / "colormap.json")));
    const ScalarField sub = load_field(dir / "r" / "subtraction.csv");
    EXPECT_EQ(sub.width(), 24u);
    const ScalarField agg = aggregate(b.subtraction, Aggregation::Max);
    for (std::size_t k = 0; k < agg.size(); ++k) EXPECT_NEAR(sub.values()[k], agg.values()[k], 1e-6);
}

TEST(Report, ReplacesEarlierReportOnly)
{
    TempDir dir;
    const EvaluationBundle b = evaluate(field_from(3, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8}), grayscale_uniform(0, 8), {});
    write_report(b, dir / "r");
    const std::string first = read_file(dir / "r" / "statistics.json");
    write_report(b, dir / "r");
    EXPECT_EQ(read_file(dir / "r" / "statistics.json"), first);
    EXPECT_TRUE(std::filesystem::exists(dir / "r" / "provenance.json"));

    std::filesystem::create_directories(dir / "other");
    std::ofstream(dir / "other" / "keep.txt") << "x";
    EXPECT_THROW(write_report(b, dir / "other"), IoError);
    EXPECT_TRUE(std::filesystem::exists(dir / "other" / "keep.txt"));

    std::filesystem::create_directories(dir / "empty");
    EXPECT_NO_THROW(write_report(b, dir / "empty"));
    EXPECT_TRUE(std::filesystem::exists(dir / "empty" / "statistics.json"));

    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
    EXPECT_EQ(entries, 3u);
}

TEST(Report, FieldProvenanceWithoutTestSpec)
{
    const ScalarField f = field_from(3, 1, {0, 1, 2});
    const EvaluationBundle b = evaluate(f, grayscale_uniform(0, 2), {});
    const nlohmann::json p = provenance_json(b);
    EXPECT_TRUE(p["test_spec"].is_null());
    EXPECT_EQ(p["field_sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
