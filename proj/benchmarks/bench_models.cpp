#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tsagent/models.hpp"

using namespace tsagent;

static void BM_FitAr(benchmark::State& state) {
    const auto xs = bench::noisy_series(96);
    const auto order = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto fit = models::fit_ar(xs, order);
        benchmark::DoNotOptimize(fit);
    }
}
BENCHMARK(BM_FitAr)->Arg(2)->Arg(4)->Arg(8);

static void BM_PredictSeasonalNaive(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(96);
    const auto model = models::ForecastModelId::seasonal_naive(24);
    for (auto _ : state) {
        auto fc = models::predict_time_series(model, window, 24);
        benchmark::DoNotOptimize(fc);
    }
}
BENCHMARK(BM_PredictSeasonalNaive);

static void BM_PredictAr(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(96);
    const auto model = models::ForecastModelId::autoregressive(6);
    for (auto _ : state) {
        auto fc = models::predict_time_series(model, window, 24);
        benchmark::DoNotOptimize(fc);
    }
}
BENCHMARK(BM_PredictAr);

static void BM_OneStepFits(benchmark::State& state) {
    const auto xs = bench::noisy_series(static_cast<std::size_t>(state.range(0)));
    const auto model = models::ForecastModelId::moving_average(12);
    for (auto _ : state) {
        auto fits = models::one_step_fits(model, xs);
        benchmark::DoNotOptimize(fits);
    }
}
BENCHMARK(BM_OneStepFits)->Arg(96)->Arg(512);

BENCHMARK_MAIN();
