#include "tsagent/batch.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "tsagent/errors.hpp"
#include "tsagent/metrics.hpp"

namespace tsagent::eval {

namespace {

std::unique_ptr<agent::Policy> build_policy(const RunConfig& config) {
    if (config.policy_kind == "remote") {
        if (config.llm.endpoint.empty())
            throw ConfigError("batch: policy.kind=remote requires llm.endpoint");
        return agent::make_remote_policy(config.llm);
    }
    return agent::make_scripted_policy(config.scripted);
}

}  // namespace

nlohmann::ordered_json EvalReport::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["dataset"] = dataset_id;
    j["windows_evaluated"] = windows_evaluated;
    nlohmann::ordered_json eps;
    eps["completed"] = completed;
    eps["failed_format"] = failed_format;
    eps["failed_transport"] = failed_transport;
    j["episodes"] = std::move(eps);
    if (mse)
        j["mse"] = *mse;
    else
        j["mse"] = nullptr;
    if (mae)
        j["mae"] = *mae;
    else
        j["mae"] = nullptr;
    j["metric_episodes"] = metric_episodes;
    nlohmann::ordered_json rw;
    rw["scored_episodes"] = scored_episodes;
    rw["mean_total"] = mean_total;
    rw["mean_accuracy"] = mean_accuracy;
    rw["mean_trend"] = mean_trend;
    rw["mean_seasonal"] = mean_seasonal;
    rw["mean_turning"] = mean_turning;
    rw["format_valid_fraction"] = format_valid_fraction;
    j["reward"] = std::move(rw);
    if (include_timing) j["wall_ms"] = wall_ms;
    return j;
}

std::string EvalReport::table() const {
    char buf[512];
    std::string out;
    out += "dataset            windows  completed  fail-fmt  fail-net        MSE        MAE  mean-reward\n";
    std::snprintf(buf, sizeof(buf), "%-18s %7zu  %9zu  %8zu  %8zu  ", dataset_id.c_str(),
                  windows_evaluated, completed, failed_format, failed_transport);
    out += buf;
    if (mse)
        std::snprintf(buf, sizeof(buf), "%9.4f  %9.4f", *mse, *mae);
    else
        std::snprintf(buf, sizeof(buf), "%9s  %9s", "n/a", "n/a");
    out += buf;
    std::snprintf(buf, sizeof(buf), "  %11.4f\n", mean_total);
    out += buf;
    return out;
}

BatchResult run_batch_windows(const std::vector<Window>& windows, const RunConfig& config) {
    if (windows.empty()) throw DataError("batch: zero completable windows");
    const auto t0 = std::chrono::steady_clock::now();

    models::ExternalModelRegistry externals;
    for (const auto& [name, ep] : config.external_endpoints)
        externals.register_endpoint(name, ep);
    agent::EpisodeConfig episode = config.episode;
    episode.externals = &externals;

    auto policy = build_policy(config);

    std::vector<agent::EpisodeTrace> traces(windows.size());
    const std::size_t workers = std::max<std::size_t>(1, config.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < windows.size(); ++i)
            traces[i] = agent::run_episode(windows[i], *policy, episode);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= windows.size()) return;
                    traces[i] = agent::run_episode(windows[i], *policy, episode);
                }
            });
        for (auto& t : pool) t.join();
    }

    EvalReport report;
    report.dataset_id = config.dataset_id;
    report.windows_evaluated = windows.size();
    double mse_acc = 0.0, mae_acc = 0.0;
    double total_acc = 0.0, acc_acc = 0.0, trend_acc = 0.0, seas_acc = 0.0, turn_acc = 0.0;
    std::size_t format_ok = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& trace = traces[i];
        switch (trace.status) {
            case agent::EpisodeStatus::Completed: ++report.completed; break;
            case agent::EpisodeStatus::FailedFormat: ++report.failed_format; break;
            case agent::EpisodeStatus::FailedTransport: ++report.failed_transport; break;
        }
        if (trace.status == agent::EpisodeStatus::Completed && trace.final_forecast &&
            windows[i].target && trace.final_forecast->rows() == windows[i].target->rows() &&
            trace.final_forecast->cols() == windows[i].target->cols()) {
            mse_acc += mse(*trace.final_forecast, *windows[i].target);
            mae_acc += mae(*trace.final_forecast, *windows[i].target);
            ++report.metric_episodes;
        }
        if (trace.reward) {
            ++report.scored_episodes;
            total_acc += trace.reward->total;
            acc_acc += trace.reward->accuracy;
            trend_acc += trace.reward->trend;
            seas_acc += trace.reward->seasonal;
            turn_acc += trace.reward->turning;
            if (trace.reward->format_ok) ++format_ok;
        }
    }
    if (report.metric_episodes > 0) {
        report.mse = mse_acc / static_cast<double>(report.metric_episodes);
        report.mae = mae_acc / static_cast<double>(report.metric_episodes);
    }
    if (report.scored_episodes > 0) {
        const auto n = static_cast<double>(report.scored_episodes);
        report.mean_total = total_acc / n;
        report.mean_accuracy = acc_acc / n;
        report.mean_trend = trend_acc / n;
        report.mean_seasonal = seas_acc / n;
        report.mean_turning = turn_acc / n;
        report.format_valid_fraction = static_cast<double>(format_ok) / n;
    }
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    return BatchResult{std::move(report), std::move(traces)};
}

BatchResult run_batch(const RunConfig& config) {
    if (config.dataset_path.empty()) throw ConfigError("batch: dataset.path required");
    const auto series = load_csv(config.dataset_path, config.schema);
    const auto parts = split(series, config.split);
    if (parts.test.length() < config.window.lookback + config.window.horizon)
        throw DataError("batch: zero completable windows (test split too short)");
    auto windows = make_windows(parts.test, config.window);
    if (config.subsample_stride > 1) {
        std::vector<Window> sampled;
        for (std::size_t i = 0; i < windows.size(); i += config.subsample_stride)
            sampled.push_back(std::move(windows[i]));
        windows = std::move(sampled);
    }
    BatchResult result = run_batch_windows(windows, config);
    result.report.dataset_id = config.dataset_id;
    return result;
}

void write_outputs(const BatchResult& result, const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(config.out_dir) / "traces");

    std::ofstream cfg(fs::path(config.out_dir) / "config_resolved.json");
    cfg << config.resolved().dump(2) << "\n";

    std::ofstream rj(fs::path(config.out_dir) / "report.json");
    rj << result.report.to_json(config.include_timing).dump(2) << "\n";

    std::ofstream rt(fs::path(config.out_dir) / "report.txt");
    rt << result.report.table();

    for (const auto& trace : result.traces) {
        const auto origin = trace.window_ref.value("origin_index", 0);
        std::ofstream tf(fs::path(config.out_dir) / "traces" /
                         ("episode_" + std::to_string(origin) + ".json"));
        tf << trace.serialize(config.include_timing);
    }
}

}  // namespace tsagent::eval
