#include <cmtest/color.hpp>
#include <cmtest/colormap.hpp>
#include <cmtest/evaluation.hpp>
#include <cmtest/io.hpp>
#include <cmtest/noise.hpp>
#include <cmtest/render.hpp>
#include <cmtest/testfields.hpp>

#include <benchmark/benchmark.h>

using namespace cmtest;

namespace {

ColormapSpec diverging(double lo, double hi)
{
    return ColormapSpec({ColormapKey::single(lo, Color::srgb(0.23, 0.30, 0.75)),
                         ColormapKey::single(0.5 * (lo + hi), Color::srgb(0.87, 0.87, 0.87)),
                         ColormapKey::single(hi, Color::srgb(0.71, 0.02, 0.15))});
}

void BM_Ciede2000(benchmark::State& state)
{
    const Color a = Color::lab(50, 2.6772, -79.7751);
    const Color b = Color::lab(50, 0, -82.7485);
    for (auto _ : state) benchmark::DoNotOptimize(ciede2000(a, b));
}
BENCHMARK(BM_Ciede2000);

void BM_ColormapSample(benchmark::State& state)
{
    const ColormapSpec cmap = diverging(-1, 1);
    double t = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cmap.sample(t));
        t = t > 1.0 ? -1.0 : t + 1e-3;
    }
}
BENCHMARK(BM_ColormapSample);

void BM_GenerateThreshold(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gen_threshold(-63, 53, 0, ThresholdType::Flat, 2, {n, n}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_GenerateThreshold)->Arg(256)->Arg(1024);

void BM_GenerateCollection(benchmark::State& state)
{
    const auto id = static_cast<CollectionId>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gen_collection(id, {512, 512}));
    state.SetLabel(std::string(to_string(id)));
}
BENCHMARK(BM_GenerateCollection)->DenseRange(0, 6);

void BM_Noise(benchmark::State& state)
{
    const ScalarField f = gen_gradient(0, 1, 1, Shape::Linear, Shape::Linear, {512, 512});
    NoiseOptions opts;
    opts.source = state.range(0) ? NoiseSource::Perlin : NoiseSource::Random;
    opts.distribution = Distribution::Normal;
    for (auto _ : state) benchmark::DoNotOptimize(apply_noise(f, {0.0, 1.0}, opts));
}
BENCHMARK(BM_Noise)->Arg(0)->Arg(1);

void BM_Evaluate(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto metric = static_cast<DifferenceMetric>(state.range(1));
    const ScalarField f = gen_threshold(-63, 53, 0, ThresholdType::Flat, 2, {n, n});
    const ColormapSpec cmap = diverging(-63, 53);
    EvaluationOptions opts;
    opts.metric = metric;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, cmap, opts));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
    state.SetLabel(std::string(to_string(metric)));
}
BENCHMARK(BM_Evaluate)
    ->Args({256, static_cast<int>(DifferenceMetric::LabEuclidean)})
    ->Args({256, static_cast<int>(DifferenceMetric::Ciede2000)})
    ->Args({512, static_cast<int>(DifferenceMetric::Ciede2000)})
    ->Unit(benchmark::kMillisecond);

void BM_RenderPanels(benchmark::State& state)
{
    const ScalarField f = gen_collection(CollectionId::Langermann, {256, 256});
    const auto [lo, hi] = f.value_range();
    const EvaluationBundle b = evaluate(f, diverging(lo, hi), {});
    for (auto _ : state) {
        const PanelSet panels = render_evaluation(b, Aggregation::Median);
        benchmark::DoNotOptimize(encode_png(panels.get(Panel::Subtraction)));
    }
}
BENCHMARK(BM_RenderPanels)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
