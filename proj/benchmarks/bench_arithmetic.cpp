#include <benchmark/benchmark.h>

#include "fraclab/arithmetic.hpp"
#include "fraclab/grid.hpp"

using namespace fraclab;

static void BM_SumsetCantor(benchmark::State& state) {
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sumset(a, a));
    }
    state.SetComplexityN(static_cast<std::int64_t>(a.count()));
}
BENCHMARK(BM_SumsetCantor)->DenseRange(8, 12)->Complexity();

static void BM_SumsetNaivePairs(benchmark::State& state) {
    // reference point: the quadratic pair loop the bitset path replaces
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    for (auto _ : state) {
        std::vector<std::uint64_t> out;
        out.reserve(a.count());
        for (std::uint64_t x : a.cells)
            for (std::uint64_t y : a.cells) {
                out.push_back(x + y);
                out.push_back(x + y + 1);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_SumsetNaivePairs)->DenseRange(6, 9);

static void BM_DilatedSum(benchmark::State& state) {
    const GridSet a = make_cantor({4, {0, 1, 2}, static_cast<int>(state.range(0))});
    const std::vector<double> coeffs = sample_coefficients(a, 2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dilated_sum(coeffs, a));
    }
}
BENCHMARK(BM_DilatedSum)->DenseRange(5, 8);

static void BM_ConvolveSum(benchmark::State& state) {
    const GridSet a = make_cantor({3, {0, 2}, static_cast<int>(state.range(0))});
    const WeightedMeasure m = uniform_measure(a);
    for (auto _ : state) {
        benchmark::DoNotOptimize(convolve_sum_measures(m, m));
    }
}
BENCHMARK(BM_ConvolveSum)->DenseRange(6, 9);
