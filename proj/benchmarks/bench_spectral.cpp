#include <benchmark/benchmark.h>

#include "cspref/refute.hpp"
#include "cspref/rng.hpp"
#include "cspref/spectral.hpp"

using namespace cspref;

static void BM_CertifiedNormUpper(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    DenseSym made;
    made.dim = dim;
    made.a.assign(std::size_t(dim) * dim, 0.0);
    CounterRng rng(3);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = rng.next_double() < 0.05 ? (rng.next_u64() & 1 ? 1.0 : -1.0) : 0.0;
            made.at(i, j) = v;
            made.at(j, i) = v;
        }
    for (auto _ : state) {
        DenseSym m = made;
        NormCertificate cert = certified_norm_upper(m);
        benchmark::DoNotOptimize(&cert);
    }
}
BENCHMARK(BM_CertifiedNormUpper)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_XorRefute(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double mbar = std::pow(n, 1.5) * std::pow(std::log(n), 3);
    Instance inst = sample_instance(make_xor(3), n, mbar / (8.0 * n * n * n), 7);
    for (auto _ : state) {
        RefutationOutcome out = xor_strong_refute(inst);
        benchmark::DoNotOptimize(&out);
    }
}
BENCHMARK(BM_XorRefute)->Arg(40)->Arg(60)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_InstanceSampling(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double p = 1e5 / (8.0 * n * n * n);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Instance inst = sample_instance(make_xor(3), n, p, ++seed);
        benchmark::DoNotOptimize(&inst);
    }
}
BENCHMARK(BM_InstanceSampling)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
