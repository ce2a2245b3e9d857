#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tsagent/reward.hpp"

using namespace tsagent;

namespace {

Matrix column(const std::vector<double>& xs) {
    std::vector<std::vector<double>> rows;
    for (double v : xs) rows.push_back({v});
    return Matrix::from_rows(rows);
}

}  // namespace

static void BM_Decompose(benchmark::State& state) {
    const auto xs = bench::noisy_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto d = reward::decompose(xs, 24);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Decompose)->Arg(96)->Arg(512)->Arg(4096);

static void BM_TurningPointScore(benchmark::State& state) {
    const auto f = column(bench::noisy_series(static_cast<std::size_t>(state.range(0)), 1));
    const auto t = column(bench::noisy_series(static_cast<std::size_t>(state.range(0)), 2));
    for (auto _ : state) {
        auto s = reward::turning_point_score(f, t);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_TurningPointScore)->Arg(24)->Arg(96)->Arg(512);

static void BM_TotalReward(benchmark::State& state) {
    const auto f = column(bench::noisy_series(96, 3));
    const auto t = column(bench::noisy_series(96, 4));
    reward::EpisodeRewardInputs in;
    in.forecast = &f;
    in.truth = &t;
    in.horizon = 96;
    in.period = 24;
    for (auto _ : state) {
        auto breakdown = reward::total_reward(in, {});
        benchmark::DoNotOptimize(breakdown);
    }
}
BENCHMARK(BM_TotalReward);

BENCHMARK_MAIN();
