#include <benchmark/benchmark.h>

#include "fraclab/directions.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/projection.hpp"
#include "fraclab/simplex.hpp"

using namespace fraclab;

static void BM_TubeMass(benchmark::State& state) {
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const double xi[2] = {1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(tube_mass(m, xi, 1.0 / 27.0));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(m.support.count()));
}
BENCHMARK(BM_TubeMass)->DenseRange(5, 8);

static void BM_ProjectMeasure(benchmark::State& state) {
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const double y[2] = {0.61, 0.35};
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_measure(m, y));
    }
}
BENCHMARK(BM_ProjectMeasure)->DenseRange(5, 8);

static void BM_SimplexSpectrum(benchmark::State& state) {
    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simplex_spectrum(circle, 2, static_cast<std::uint64_t>(state.range(0)), 16, 7));
    }
}
BENCHMARK(BM_SimplexSpectrum)->Arg(10000)->Arg(50000)->Arg(200000);
