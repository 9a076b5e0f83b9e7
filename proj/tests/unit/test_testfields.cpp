#include <cmtest/errors.hpp>
#include <cmtest/parallel.hpp>
#include <cmtest/testfields.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cmtest;

namespace {

constexpr double kExact = 1e-12;

// Values of a 3x refinement at the coarse pixel centers.
void expect_refinement_exact(const ScalarField& coarse, const ScalarField& fine)
{
    ASSERT_EQ(fine.width(), 3 * coarse.width());
    ASSERT_EQ(fine.height(), 3 * coarse.height());
    for (std::size_t j = 0; j < coarse.height(); ++j)
        for (std::size_t i = 0; i < coarse.width(); ++i) ASSERT_EQ(coarse.at(i, j), fine.at(3 * i + 1, 3 * j + 1));
}

} // namespace

TEST(PixelCenters, SampleConvention)
{
    EXPECT_DOUBLE_EQ(pixel_center(0, 1, 0, 4), 0.125);
    EXPECT_DOUBLE_EQ(pixel_center(-1, 1, 3, 4), 0.75);
    const ScalarField f(4, 2, {0, 8, 0, 2});
    EXPECT_DOUBLE_EQ(f.x_at(1), 3.0);
    EXPECT_DOUBLE_EQ(f.y_at(1), 1.5);
}

TEST(ScalarFieldType, Validation)
{
    EXPECT_THROW(ScalarField(0, 1, {0, 1, 0, 1}), ValidationError);
    EXPECT_THROW(ScalarField(1, 1, {0, 0, 0, 1}), ValidationError);
    EXPECT_THROW(ScalarField(2, 2, {0, 1, 0, 1}, {1, 2, 3}), ValidationError);
}

TEST(Step, Examples)
{
    const StepFunction f({0.0, 0.25, 0.75, 1.0});
    EXPECT_EQ(f(0.5, 3.2), 0.0);
    EXPECT_EQ(f(1.5, 2.1), 0.75);
    EXPECT_EQ(f(6.9, 0.4), 1.0);
    EXPECT_EQ(f.domain(), (Domain{0, 8, 0, 4}));
}

TEST(Step, RejectsNonIncreasingValues)
{
    EXPECT_THROW(StepFunction({0.0, 0.0, 1.0}), ValidationError);
    EXPECT_THROW(StepFunction({1.0, 0.5}), ValidationError);
    EXPECT_THROW(StepFunction({1.0}), ValidationError);
}

TEST(Step, FieldColumnsFollowDefinition)
{
    const std::vector<double> A{0.0, 0.25, 0.75, 1.0};
    const ScalarField f = gen_step(A, {80, 40});
    for (std::size_t j = 0; j < f.height(); ++j) {
        for (std::size_t i = 0; i < f.width(); ++i) {
            const auto col = static_cast<std::size_t>(std::floor(f.x_at(i)));
            const auto row = static_cast<std::size_t>(std::floor(f.y_at(j)));
            EXPECT_EQ(f.at(i, j), col % 2 == 0 ? A[col / 2] : A[row]);
        }
    }
}

TEST(Gradient, Examples)
{
    EXPECT_NEAR(GradientFunction(0, 1, 1, Shape::Convex, Shape::Convex)(0.5, 1.0), 0.5, kExact);
    EXPECT_NEAR(GradientFunction(0, 1, 2, Shape::Convex, Shape::Convex)(0.5, 0.5), 0.0625, kExact);
    for (double y : {0.0, 0.3, 1.0}) EXPECT_EQ(GradientFunction(2, 5, 3, Shape::Convex, Shape::Concave)(0, y), 2.0);
    const GradientFunction g(0.5, 2, 3, Shape::Concave, Shape::Concave);
    EXPECT_EQ(g.g(0), 0.5);
    EXPECT_EQ(g.g(1), 2.0);
}

TEST(Gradient, AllShapeCombinationsCoincideAtExponentOne)
{
    const Shape shapes[] = {Shape::Linear, Shape::Concave, Shape::Convex};
    const ScalarField ref = gen_gradient(0.2, 1.7, 1, Shape::Linear, Shape::Linear, {64, 48});
    for (Shape tx : shapes)
        for (Shape ty : shapes) EXPECT_EQ(gen_gradient(0.2, 1.7, 1, tx, ty, {64, 48}), ref);
}

TEST(Gradient, RejectsBadExponent)
{
    EXPECT_THROW(gen_gradient(0, 1, 0, Shape::Convex, Shape::Convex, {4, 4}), ValidationError);
}

TEST(MinMaxSaddle, Examples)
{
    EXPECT_EQ(MinMaxSaddleFunction(1, 1, 0)(0, 0), 0.0);
    const MinMaxSaddleFunction saddle(-1, 1, 0);
    EXPECT_EQ(saddle(1, 0), -1.0);
    EXPECT_EQ(saddle(0, 1), 1.0);
    EXPECT_THROW(MinMaxSaddleFunction(0, 1, 0), ValidationError);
    EXPECT_THROW(MinMaxSaddleFunction(1, 0, 0), ValidationError);
}

TEST(MinMaxSaddle, GridExtremaNearOrigin)
{
    const ScalarField mn = gen_mms(1, 1, 0, {51, 51});
    EXPECT_EQ(mn.min_max().first, 0.0);
    EXPECT_EQ(mn.at(25, 25), 0.0);
    const ScalarField mx = gen_mms(-1, -1, 1, {50, 50});
    const auto [lo, hi] = mx.min_max();
    (void)lo;
    EXPECT_NEAR(hi, 1.0, 1e-3);
    EXPECT_EQ(mx.at(24, 24), hi);
}

TEST(RidgeValley, Examples)
{
    const RidgeValleyFunction f(0, 1, 1, Shape::Concave, Shape::Convex);
    EXPECT_NEAR(f(0, 1), 1.0, kExact);
    for (double y : {0.0, 0.4, 1.0}) EXPECT_NEAR(f(-1, y), 0.0, kExact);
    EXPECT_NEAR(RidgeValleyFunction(0, 1, 2, Shape::Concave, Shape::Linear)(0.5, 1), 0.75, kExact);
    for (Shape tx : {Shape::Concave, Shape::Convex}) {
        const RidgeValleyFunction g(0.3, 2, 3, tx, Shape::Concave);
        EXPECT_NEAR(g(1, 0.7), 0.3, kExact);
        EXPECT_NEAR(g(-1, 0.7), 0.3, kExact);
    }
}

TEST(RidgeValley, ValleyMinimumOnCenterColumn)
{
    const ScalarField f = gen_ridge_valley(1, 0, 2, Shape::Concave, Shape::Convex, {41, 20});
    for (std::size_t j = 0; j < f.height(); ++j) {
        double best = f.at(0, j);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < f.width(); ++i)
            if (f.at(i, j) < best) best = f.at(i, j), arg = i;
        EXPECT_EQ(arg, 20u);
    }
}

TEST(RidgeValley, SeparateLineExponent)
{
    const RidgeValleyFunction shared(0, 1, 2, Shape::Concave, Shape::Convex);
    const RidgeValleyFunction split(0, 1, 2, Shape::Concave, Shape::Convex, 3);
    EXPECT_NEAR(shared(0, 0.5), 0.25, kExact);
    EXPECT_NEAR(split(0, 0.5), 0.125, kExact);
}

TEST(Frequency, Examples)
{
    const FrequencyFunction f(3, 0.4, 0.2);
    for (double xj : f.boundaries())
        for (double y : {0.0, 0.5}) EXPECT_NEAR(f(xj, y), 0.2, kExact);
    EXPECT_NEAR(FrequencyFunction(0, 0.5, 0.5)(0.75, 0), 0.0, kExact);
    for (double x : {0.1, 0.9, 1.7}) EXPECT_EQ(f(x, 1.0), 0.2);
    EXPECT_NEAR(f.boundaries().back(), 1.0 + 0.5 + 1.0 / 3 + 0.25, kExact);
}

TEST(Frequency, SegmentAmplitudeAtBottomRow)
{
    const double W = 0.3;
    const ScalarField field = gen_frequency(4, W, 0.0, {4000, 3});
    const FrequencyFunction f(4, W, 0.0);
    const auto& xs = f.boundaries();
    for (std::size_t seg = 1; seg < xs.size(); ++seg) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t i = 0; i < field.width(); ++i) {
            const double x = field.x_at(i);
            if (x < xs[seg - 1] || x > xs[seg]) continue;
            const double v = f(x, 0.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double px = (xs.back() - xs.front()) / field.width();
        const double slack = 2.0 * std::numbers::pi * static_cast<double>(seg) * W * px;
        EXPECT_NEAR(hi - lo, 2 * W, slack);
    }
}

TEST(Frequency, AliasingWarning)
{
    std::string warning;
    gen_frequency(5, 0.5, 0.5, {20, 10}, &warning);
    EXPECT_NE(warning.find("aliasing"), std::string::npos) << warning;
    warning.clear();
    gen_frequency(5, 0.5, 0.5, {2000, 10}, &warning);
    EXPECT_TRUE(warning.empty());
}

TEST(Threshold, Examples)
{
    const ThresholdFunction f(-63, 53, 0, ThresholdType::Flat, 2);
    EXPECT_NEAR(f(1, -1), 53.0, kExact);
    EXPECT_NEAR(f(-1, -1), -63.0, kExact);
    for (double y : {-1.0, 0.0, 0.6}) EXPECT_EQ(f(0, y), 0.0);
    EXPECT_NEAR(f(1, 1), 0.0, kExact);
    EXPECT_NEAR(f.upper(0.25), (53.0 + 0) / 2 - 53.0 / 2 * 0.25, kExact);
    EXPECT_NEAR(f.lower(0.25), (0 - 63.0) / 2 + 63.0 / 2 * 0.25, kExact);
}

TEST(Threshold, FlatAndSteepCoincideAtExponentOne)
{
    const ScalarField lin = gen_threshold(-1, 2, 0.5, ThresholdType::Linear, 1, {60, 30});
    EXPECT_EQ(gen_threshold(-1, 2, 0.5, ThresholdType::Flat, 1, {60, 30}), lin);
    EXPECT_EQ(gen_threshold(-1, 2, 0.5, ThresholdType::Steep, 1, {60, 30}), lin);
}

TEST(Threshold, RowsAreMonotone)
{
    for (ThresholdType type : {ThresholdType::Linear, ThresholdType::Flat, ThresholdType::Steep}) {
        const ScalarField f = gen_threshold(-63, 53, 0, type, 3, {101, 40});
        for (std::size_t j = 0; j < f.height(); ++j)
            for (std::size_t i = 1; i < f.width(); ++i) ASSERT_LE(f.at(i - 1, j), f.at(i, j));
    }
}

TEST(Threshold, RejectsBadOrdering)
{
    EXPECT_THROW(ThresholdFunction(1, 2, 0, ThresholdType::Linear, 1), ValidationError);
    EXPECT_THROW(ThresholdFunction(0, 2, 2, ThresholdType::Linear, 1), ValidationError);
}

TEST(LittleBit, Examples)
{
    const LittleBitFunction f(0.1, 1, 0.0001, 0.1, 10);
    EXPECT_NEAR(f(0.5, 0), 0.1, kExact);
    EXPECT_NEAR(f(1.5, 0), 0.0999, kExact);
    EXPECT_NEAR(f(19.5, 0), 0.0, kExact);
    EXPECT_EQ(f.domain(), (Domain{0, 21, 0, 1}));
    EXPECT_EQ(f.groove_depth(1), 0.0001);
    EXPECT_EQ(f.groove_depth(19), 0.1);
}

TEST(LittleBit, SingleGrooveUsesMinimumDepth)
{
    const LittleBitFunction f(0, 1, 0.2, 0.5, 1);
    EXPECT_EQ(f.groove_depth(1), 0.2);
    EXPECT_NEAR(f(1.5, 0), -0.2, kExact);
}

TEST(LittleBit, EvenStripesAreTheBackground)
{
    const ScalarField f = gen_little_bit(0.1, 1, 0.0001, 0.1, 10, {210, 50});
    for (std::size_t j = 0; j < f.height(); ++j) {
        const double ref = f.at(0, j);
        for (std::size_t i = 0; i < f.width(); ++i) {
            if (static_cast<long>(std::floor(f.x_at(i))) % 2 == 0) ASSERT_EQ(f.at(i, j), ref);
        }
    }
}

TEST(LittleBit, Validation)
{
    EXPECT_THROW(LittleBitFunction(1, 1, 0.1, 0.2, 3), ValidationError);
    EXPECT_THROW(LittleBitFunction(0, 1, 0.0, 0.2, 3), ValidationError);
    EXPECT_THROW(LittleBitFunction(0, 1, 0.3, 0.2, 3), ValidationError);
    EXPECT_THROW(LittleBitFunction(0, 1, 0.1, 0.2, 0), ValidationError);
}

TEST(Collection, ClosedFormPoints)
{
    EXPECT_EQ(CollectionFunction(CollectionId::Bukin6)(-10, 1), 0.0);
    EXPECT_EQ(CollectionFunction(CollectionId::SixHumpCamel)(0, 0), 0.0);
    EXPECT_EQ(CollectionFunction(CollectionId::Mandelbrot, 300)(0, 0), 300.0);
    EXPECT_LT(CollectionFunction(CollectionId::Mandelbrot, 300)(0.9, 0.9), 10.0);
    EXPECT_NEAR(CollectionFunction(CollectionId::Levy13)(1, 1), 0.0, 1e-28);
    EXPECT_NEAR(CollectionFunction(CollectionId::Schwefel)(420.9687, 420.9687), 0.0, 1e-3);
}

TEST(Collection, GridMinimaMatchBruteForceOracles)
{
    // Oracles: independent 2001^2 linspace grid searches.
    const ScalarField camel = gen_collection(CollectionId::SixHumpCamel, {1001, 501});
    EXPECT_NEAR(camel.min_max().first, -1.031627443209, 1e-3);
    const ScalarField tray = gen_collection(CollectionId::CrossInTray, {1001, 1001});
    EXPECT_NEAR(tray.min_max().first, -2.0626117945250684, 1e-3);
}

TEST(Collection, Rescale)
{
    const ScalarField f = gen_collection(CollectionId::Langermann, {64, 64}, std::pair{-1.0, 1.0});
    const auto [lo, hi] = f.min_max();
    EXPECT_NEAR(lo, -1.0, kExact);
    EXPECT_NEAR(hi, 1.0, kExact);
}

TEST(Collection, Names)
{
    for (auto id : {CollectionId::Bukin6, CollectionId::Langermann, CollectionId::CrossInTray, CollectionId::Levy13,
                    CollectionId::Schwefel, CollectionId::SixHumpCamel, CollectionId::Mandelbrot})
        EXPECT_EQ(parse_collection_id(to_string(id)), id);
    EXPECT_THROW(parse_collection_id("rosenbrock"), UnknownNameError);
}

TEST(Generators, RefinementByThreeIsExact)
{
    expect_refinement_exact(gen_gradient(0, 1, 3, Shape::Concave, Shape::Convex, {20, 10}),
                            gen_gradient(0, 1, 3, Shape::Concave, Shape::Convex, {60, 30}));
    expect_refinement_exact(gen_threshold(-63, 53, 0, ThresholdType::Steep, 2, {20, 10}),
                            gen_threshold(-63, 53, 0, ThresholdType::Steep, 2, {60, 30}));
    expect_refinement_exact(gen_little_bit(0.1, 1, 0.01, 0.1, 5, {22, 10}),
                            gen_little_bit(0.1, 1, 0.01, 0.1, 5, {66, 30}));
    expect_refinement_exact(gen_frequency(3, 0.5, 0.5, {30, 10}), gen_frequency(3, 0.5, 0.5, {90, 30}));
    expect_refinement_exact(gen_collection(CollectionId::Schwefel, {16, 16}),
                            gen_collection(CollectionId::Schwefel, {48, 48}));
}

TEST(Generators, IdenticalUnderAnyThreadCount)
{
    set_thread_count(1);
    const ScalarField ref = gen_collection(CollectionId::Mandelbrot, {97, 83});
    for (unsigned t : {2u, 4u, 16u}) {
        set_thread_count(t);
        EXPECT_EQ(gen_collection(CollectionId::Mandelbrot, {97, 83}), ref);
    }
    set_thread_count(0);
}
