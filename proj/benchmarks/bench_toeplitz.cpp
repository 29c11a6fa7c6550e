#include <benchmark/benchmark.h>

#include "shuttercert/extractor.hpp"
#include "shuttercert/rng.hpp"

using namespace shuttercert;

namespace {

BitVec random_bits(Rng& rng, std::size_t n) {
    BitVec v(n);
    for (auto& w : v.words()) w = rng.u64();
    v.mask_tail();
    return v;
}

void BM_toeplitz_hash(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    Rng rng(1);
    const BitVec seed = random_bits(rng, n + m - 1);
    const BitVec input = random_bits(rng, n);
    const ToeplitzHasher hasher(seed, n, m, 1e20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hasher.hash(input));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * (n / 8));
}

void BM_toeplitz_setup(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    Rng rng(1);
    const BitVec seed = random_bits(rng, n + m - 1);
    for (auto _ : state) {
        ToeplitzHasher hasher(seed, n, m, 1e20);
        benchmark::DoNotOptimize(hasher);
    }
}

}  // namespace

// The experiment's dimensions and a couple of smaller shapes.
BENCHMARK(BM_toeplitz_hash)->Args({83000, 13661})->Args({83000, 37814})->Args({8192, 2048})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_toeplitz_setup)->Args({83000, 13661})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
