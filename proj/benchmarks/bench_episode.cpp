#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tsagent/episode.hpp"
#include "tsagent/prompt.hpp"

using namespace tsagent;

static void BM_ScriptedEpisode(benchmark::State& state) {
    auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    window.target = Matrix(window.spec.horizon, 1, 10.0);
    auto policy = agent::make_scripted_policy({});
    for (auto _ : state) {
        auto trace = agent::run_episode(window, *policy, {});
        benchmark::DoNotOptimize(trace);
    }
    state.counters["turns"] = 3;
}
BENCHMARK(BM_ScriptedEpisode)->Arg(96)->Arg(168);

static void BM_PromptRender(benchmark::State& state) {
    const auto window = bench::noisy_seasonal_window(static_cast<std::size_t>(state.range(0)));
    const agent::Memory memory;
    const auto bundle = agent::assemble_prompt(memory, window, {}, 1);
    for (auto _ : state) {
        auto text = bundle.render();
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_PromptRender)->Arg(96)->Arg(512);

static void BM_TraceSerialize(benchmark::State& state) {
    auto window = bench::noisy_seasonal_window(96);
    window.target = Matrix(window.spec.horizon, 1, 10.0);
    auto policy = agent::make_scripted_policy({});
    const auto trace = agent::run_episode(window, *policy, {});
    for (auto _ : state) {
        auto text = trace.serialize();
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_TraceSerialize);

BENCHMARK_MAIN();
