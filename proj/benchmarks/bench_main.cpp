#include <benchmark/benchmark.h>

#include <random>

#include "tlab/lambda_sets.hpp"
#include "tlab/norms.hpp"
#include "tlab/transforms.hpp"

namespace {

tlab::SampledFunction random_function(std::size_t points) {
    tlab::SampledFunction f = tlab::make_sampled(tlab::make_grid(32.0, points));
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t j = 0; j < points; ++j) {
        const double x = f.grid.node(j);
        f.values[j] = gauss(rng) * std::exp(-x * x / 16.0);
    }
    return f;
}

void BM_FourierRoundTrip(benchmark::State& state) {
    tlab::SampledFunction f = random_function(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        tlab::SampledFunction back = tlab::fourier_inverse(tlab::fourier_forward(f));
        benchmark::DoNotOptimize(back.values.data());
    }
}
BENCHMARK(BM_FourierRoundTrip)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_BmoScan(benchmark::State& state) {
    tlab::SampledFunction h = random_function(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        tlab::NormReport r = tlab::bmo_seminorm(h, tlab::WindowPolicy::dyadic);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_BmoScan)->Arg(1024)->Arg(4096);

void BM_GramAssembly(benchmark::State& state) {
    tlab::DiscreteSet lambda = tlab::arithmetic_set(1.0, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        Eigen::MatrixXd g = tlab::exponential_gram(lambda, 3.0);
        benchmark::DoNotOptimize(g.data());
    }
}
BENCHMARK(BM_GramAssembly)->Arg(50)->Arg(100)->Arg(199);

} // namespace

BENCHMARK_MAIN();
