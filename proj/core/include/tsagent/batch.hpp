#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsagent/episode.hpp"
#include "tsagent/run_config.hpp"

namespace tsagent::eval {

struct EvalReport {
    std::string dataset_id;
    std::size_t windows_evaluated = 0;
    std::size_t completed = 0;
    std::size_t failed_format = 0;
    std::size_t failed_transport = 0;

    /// Raw-scale metrics over completed episodes with exact-shape forecasts.
    /// Absent when nothing completed (reported, and ordered worst by
    /// comparisons).
    std::optional<double> mse;
    std::optional<double> mae;
    std::size_t metric_episodes = 0;

    // Mean reward components over scored episodes.
    std::size_t scored_episodes = 0;
    double mean_total = 0.0;
    double mean_accuracy = 0.0;
    double mean_trend = 0.0;
    double mean_seasonal = 0.0;
    double mean_turning = 0.0;
    double format_valid_fraction = 0.0;

    double wall_ms = 0.0;

    nlohmann::ordered_json to_json(bool include_timing) const;
    std::string table() const;
};

struct BatchResult {
    EvalReport report;
    std::vector<agent::EpisodeTrace> traces;  // one per evaluated window, in window order
};

/// One episode per test-split window (subsampled by run.subsample_stride),
/// fanned out over a worker pool. Aggregation is order-independent; outputs
/// are deterministic given the seed and a scripted policy.
BatchResult run_batch(const RunConfig& config);

/// Same pipeline over explicit windows (fixtures, ablation studies).
BatchResult run_batch_windows(const std::vector<Window>& windows, const RunConfig& config);

/// Writes report.json, report.txt, config_resolved.json, and
/// traces/episode_<origin>.json under config.out_dir.
void write_outputs(const BatchResult& result, const RunConfig& config);

}  // namespace tsagent::eval
