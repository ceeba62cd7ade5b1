#include <benchmark/benchmark.h>

#include "cspref/predicate.hpp"
#include "cspref/rng.hpp"
#include "cspref/twise.hpp"

using namespace cspref;

static void BM_WalshHadamard(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::vector<std::int64_t> data(std::size_t(1) << k);
    CounterRng rng(1);
    for (auto& v : data) v = static_cast<std::int64_t>(rng.next_below(1024)) - 512;
    for (auto _ : state) {
        auto copy = data;
        walsh_hadamard(copy);
        benchmark::DoNotOptimize(copy.data());
    }
    state.SetComplexityN(std::int64_t(1) << k);
}
BENCHMARK(BM_WalshHadamard)->DenseRange(10, 20, 5)->Complexity(benchmark::oNLogN);

static void BM_FourierExpansion(benchmark::State& state) {
    Predicate p = make_thr(static_cast<int>(state.range(0)), -1);
    for (auto _ : state) {
        FourierExpansion f = fourier_expansion(p);
        benchmark::DoNotOptimize(f.numerators().data());
    }
}
BENCHMARK(BM_FourierExpansion)->Arg(9)->Arg(13)->Arg(17);

static void BM_HuangSeparatorEval(benchmark::State& state) {
    const int kappa = static_cast<int>(state.range(0));
    HuangSeparator sep(kappa);
    auto z = huang_strong_string(kappa, 0x2b);
    for (auto _ : state) {
        Rat v = sep.evaluate_raw(z);
        benchmark::DoNotOptimize(&v);
    }
}
BENCHMARK(BM_HuangSeparatorEval)->Arg(9)->Arg(11);

static void BM_HuangPointValue(benchmark::State& state) {
    const int kappa = static_cast<int>(state.range(0));
    auto z = huang_strong_string(kappa, 0x17);
    z[3] = -z[3];
    for (auto _ : state) benchmark::DoNotOptimize(huang_value(kappa, z));
}
BENCHMARK(BM_HuangPointValue)->Arg(9)->Arg(12);
