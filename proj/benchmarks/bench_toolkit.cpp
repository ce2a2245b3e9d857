#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tsagent/toolkit.hpp"

using namespace tsagent;

static void BM_DataQuality(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto result = toolkit::extract_data_quality(window);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_DataQuality)->Arg(96)->Arg(168)->Arg(512);

static void BM_BasicStatistics(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto result = toolkit::extract_basic_statistics(window);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_BasicStatistics)->Arg(96)->Arg(168)->Arg(512);

static void BM_WithinChannelDynamics(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto result = toolkit::extract_within_channel_dynamics(window, "y");
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_WithinChannelDynamics)->Arg(96)->Arg(168)->Arg(512);

static void BM_SummarizeEvents(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto result = toolkit::summarize_events(window, "y");
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_SummarizeEvents)->Arg(96)->Arg(168)->Arg(512);

static void BM_ResidualDiagnostics(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    const auto baseline = models::ForecastModelId::seasonal_naive(24);
    for (auto _ : state) {
        auto result = toolkit::diagnose_residuals(window, baseline);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_ResidualDiagnostics)->Arg(96)->Arg(168)->Arg(512);

static void BM_ChangepointScan(benchmark::State& state) {
    const auto xs = bench::noisy_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto cps = toolkit::detect_changepoints(xs, 12, 3.0);
        benchmark::DoNotOptimize(cps);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChangepointScan)->Range(96, 4096)->Complexity(benchmark::oN);

BENCHMARK_MAIN();
