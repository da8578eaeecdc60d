// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "gbt/correlation.hpp"
#include "gbt/kernels.hpp"
#include "gbt/ulam.hpp"

using namespace gbt;

namespace {

const ExpandingMap& sympow2() {
    static const ExpandingMap M(CutFunction::symmetric_power(2.0));
    return M;
}

const UlamMatrix& ulam16() {
    static const UlamMatrix U = UlamMatrix::build(sympow2(), std::size_t{1} << 16);
    return U;
}

Backend backend(const benchmark::State& s) { return s.range(0) ? Backend::Parallel : Backend::Serial; }

void BM_UlamBuild(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(UlamMatrix::build(sympow2(), cells, backend(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cells));
}

void BM_Transfer(benchmark::State& state) {
    const UlamMatrix& U = ulam16();
    std::vector<double> v(U.n_cells(), 1.0);
    std::vector<double> w(U.n_cells());
    for (auto _ : state) {
        U.transfer(v.data(), w.data(), backend(state));
        benchmark::DoNotOptimize(w.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(U.PT().nnz()));
}

void BM_Correlate2D(benchmark::State& state) {
    const BakerMap B(sympow2());
    const Fn2 x = observable_2d("x");
    const Fn2 xy = observable_2d("xy");
    const std::size_t samples = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlate_2d(B, x, xy, 50, samples, kDefaultSeed, backend(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples * 51));
}

void BM_Quadrature1D(benchmark::State& state) {
    const Fn1 id = observable_1d("id");
    const std::size_t grid = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlate_1d_quadrature(sympow2(), id, id, 50, grid, backend(state)));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid * 51));
}

}  // namespace

// First argument: 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_UlamBuild)->ArgsProduct({{0, 1}, {1 << 14, 1 << 16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Transfer)->ArgsProduct({{0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Correlate2D)->ArgsProduct({{0, 1}, {1 << 16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Quadrature1D)->ArgsProduct({{0, 1}, {1 << 16}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
