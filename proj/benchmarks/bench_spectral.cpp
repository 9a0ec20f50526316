#include <benchmark/benchmark.h>

#include "fraclab/directions.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

static void BM_MeasureFourier(benchmark::State& state) {
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const double xi[2] = {7.5, 11.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_fourier(m, xi));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(m.support.count()));
}
BENCHMARK(BM_MeasureFourier)->DenseRange(4, 7);

static void BM_DecayFit(benchmark::State& state) {
    const WeightedMeasure m = uniform_measure(make_full_interval(1 << state.range(0)));
    std::vector<double> freqs;
    for (int i = 0; i < 10; ++i) freqs.push_back(4.5 + 6.0 * i);
    const auto dirs = unit_directions(1, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decay_fit(m, freqs, dirs));
    }
}
BENCHMARK(BM_DecayFit)->DenseRange(8, 12);

static void BM_EnergyIntegral(benchmark::State& state) {
    const WeightedMeasure m = uniform_measure(make_cantor({3, {0, 2}, static_cast<int>(state.range(0))}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(energy_integral(m, 0.63));
    }
}
BENCHMARK(BM_EnergyIntegral)->DenseRange(6, 10);
