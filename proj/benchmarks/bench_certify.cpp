#include <benchmark/benchmark.h>

#include "shuttercert/certify.hpp"
#include "shuttercert/lp_oracle.hpp"

using namespace shuttercert;

namespace {

void BM_certify_simple(benchmark::State& state) {
    const SimpleSource src(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_simple(src, 0.45, 0.04));
    }
}

void BM_certify_poisson(benchmark::State& state) {
    const MixedSource src = poisson_mixture(1.06, 0.4882);
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_known_distribution(src, 0.45, 0.04));
    }
}

void BM_certify_mean(benchmark::State& state) {
    const MeanConstrainedSource src(1.06, 0.4882);
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_mean_constraint(src, 0.45, 0.04));
    }
}

void BM_mixed_lp(benchmark::State& state) {
    const MixedSource src = poisson_mixture(1.06, 0.4882, 1e-9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_mixed_lp(src, 0.45, 0.04, true));
    }
}

}  // namespace

BENCHMARK(BM_certify_simple);
BENCHMARK(BM_certify_poisson);
BENCHMARK(BM_certify_mean)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_mixed_lp)->Unit(benchmark::kMicrosecond);
