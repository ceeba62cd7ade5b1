#include <benchmark/benchmark.h>

#include "cspref/twise.hpp"

using namespace cspref;

static void BM_TwiseDistance(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int t = static_cast<int>(state.range(1));
    Predicate p = (k & 1) ? make_maj(k) : make_nae(k);
    for (auto _ : state) {
        LPResult res = twise_distance(p, t);
        benchmark::DoNotOptimize(&res);
    }
}
BENCHMARK(BM_TwiseDistance)
    ->Args({5, 2})
    ->Args({7, 3})
    ->Args({9, 3})
    ->Args({10, 3})
    ->Unit(benchmark::kMillisecond);

static void BM_GranularityBound(benchmark::State& state) {
    for (auto _ : state) {
        Rat b = granularity_bound(10, 3);
        benchmark::DoNotOptimize(&b);
    }
}
BENCHMARK(BM_GranularityBound);

static void BM_VerifySeparatingUnivariate(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    LibrarySeparator sep = library_separator("maj", k);
    const auto& spec = std::get<SymmetricSpec>(sep.polynomial);
    ThresholdPredicate tp{k, false, 1};
    for (auto _ : state) benchmark::DoNotOptimize(verify_separating(tp, spec, sep.delta));
}
BENCHMARK(BM_VerifySeparatingUnivariate)->Arg(25)->Arg(101)->Unit(benchmark::kMillisecond);
