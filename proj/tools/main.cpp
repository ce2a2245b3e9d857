#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "tsagent/batch.hpp"
#include "tsagent/csv.hpp"
#include "tsagent/curriculum.hpp"
#include "tsagent/errors.hpp"
#include "tsagent/metrics.hpp"
#include "tsagent/serve.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tsagent;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTransport = 4;

struct CommonFlags {
    std::string config_path;
    long long seed = -1;
    std::string out_dir;
    std::vector<std::string> overrides;  // key=value config overrides
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Run configuration file");
    cmd->add_option("--seed", flags.seed, "Override run.seed");
    cmd->add_option("--out", flags.out_dir, "Override run.out_dir");
    cmd->add_option("--set", flags.overrides, "Override any config key, e.g. --set reward.w_acc=0.5");
}

eval::RunConfig resolve_config(const CommonFlags& flags) {
    std::map<std::string, std::string> kv;
    if (!flags.config_path.empty()) kv = eval::read_config_file(flags.config_path);
    const std::pair<const char*, const char*> env_keys[] = {
        {"TSAGENT_LLM_ENDPOINT", "llm.endpoint"},
        {"TSAGENT_LLM_API_KEY", "llm.api_key"},
        {"TSAGENT_LLM_MODEL", "llm.model"},
    };
    for (const auto& [env, key] : env_keys)
        if (const char* v = std::getenv(env)) kv[key] = v;
    for (const auto& ov : flags.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + ov + "'");
        kv[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    if (flags.seed >= 0) kv["run.seed"] = std::to_string(flags.seed);
    if (!flags.out_dir.empty()) kv["run.out_dir"] = flags.out_dir;
    return eval::build_run_config(kv);
}

Matrix matrix_from_csv_or_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
        auto j = nlohmann::json::parse(text);
        if (j.is_object() && j.contains("forecast")) j = j["forecast"];
        if (j.is_object() && j.contains("values")) j = j["values"];
        std::vector<std::vector<double>> rows;
        for (const auto& row : j) {
            std::vector<double> r;
            if (row.is_array())
                for (const auto& v : row) r.push_back(v.get<double>());
            else
                r.push_back(row.get<double>());
            rows.push_back(std::move(r));
        }
        return Matrix::from_rows(rows);
    }
    // Plain numeric CSV, no header: one row per step.
    std::vector<std::vector<double>> rows;
    std::string line;
    std::stringstream ss(text);
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) r.push_back(std::strtod(field.c_str(), nullptr));
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw DataError("'" + path + "' holds no rows");
    return Matrix::from_rows(rows);
}

int cmd_ingest(const CommonFlags& flags) {
    const auto config = resolve_config(flags);
    if (config.dataset_path.empty()) throw ConfigError("ingest: dataset.path required");
    const auto series = load_csv(config.dataset_path, config.schema);
    const auto missing = missing_positions(series);

    nlohmann::ordered_json j;
    j["path"] = config.dataset_path;
    j["length"] = series.length();
    j["channels"] = series.channel_names();
    j["frequency_seconds"] = series.frequency_seconds();
    j["first_timestamp"] = format_timestamp(series.timestamps().front());
    j["last_timestamp"] = format_timestamp(series.timestamps().back());
    j["missing_cells"] = missing.size();
    auto pos = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < missing.size() && i < 64; ++i)
        pos.push_back(nlohmann::ordered_json{{"row", missing[i].row}, {"col", missing[i].col}});
    j["missing_positions"] = std::move(pos);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_analyze(const CommonFlags& flags, const std::string& tool, const std::string& channel,
                std::size_t origin) {
    auto config = resolve_config(flags);
    if (config.dataset_path.empty()) throw ConfigError("analyze: dataset.path required");
    const auto series = load_csv(config.dataset_path, config.schema);
    auto windows = make_windows(series, config.window);
    std::size_t index = windows.size();
    for (std::size_t i = 0; i < windows.size(); ++i)
        if (windows[i].origin_index == origin) index = i;
    if (index == windows.size())
        throw DataError("analyze: no window with origin_index " + std::to_string(origin));

    nlohmann::json args = nlohmann::json::object();
    if (!channel.empty()) args["channel"] = channel;
    const auto result =
        toolkit::run_tool(tool, args, windows[index], config.episode.toolkit);
    std::cout << result.to_json().dump(2) << "\n";
    return kExitOk;
}

int cmd_episode(const CommonFlags& flags, std::size_t origin, bool use_test_split) {
    auto config = resolve_config(flags);
    if (config.dataset_path.empty()) throw ConfigError("episode: dataset.path required");
    const auto series = load_csv(config.dataset_path, config.schema);
    const auto source = use_test_split ? split(series, config.split).test : series;
    auto windows = make_windows(source, config.window);
    std::size_t index = windows.size();
    for (std::size_t i = 0; i < windows.size(); ++i)
        if (windows[i].origin_index == origin) index = i;
    if (index == windows.size())
        throw DataError("episode: no window with origin_index " + std::to_string(origin));

    models::ExternalModelRegistry externals;
    for (const auto& [name, ep] : config.external_endpoints)
        externals.register_endpoint(name, ep);
    auto episode_config = config.episode;
    episode_config.externals = &externals;

    std::unique_ptr<agent::Policy> policy =
        config.policy_kind == "remote" ? agent::make_remote_policy(config.llm)
                                       : agent::make_scripted_policy(config.scripted);

    const auto trace = agent::run_episode(windows[index], *policy, episode_config);

    fs::create_directories(config.out_dir);
    const fs::path trace_path =
        fs::path(config.out_dir) / ("episode_" + std::to_string(origin) + ".json");
    std::ofstream out(trace_path);
    out << trace.serialize(config.include_timing);
    std::ofstream cfg(fs::path(config.out_dir) / "config_resolved.json");
    cfg << config.resolved().dump(2) << "\n";

    std::cout << "episode " << to_string(trace.status) << ", " << trace.turns.size()
              << " turns, trace written to " << trace_path.string() << "\n";
    if (trace.status == agent::EpisodeStatus::FailedTransport) return kExitTransport;
    return kExitOk;
}

int cmd_batch(const CommonFlags& flags) {
    const auto config = resolve_config(flags);
    const auto result = eval::run_batch(config);
    eval::write_outputs(result, config);
    std::cout << result.report.table();
    std::cout << "outputs written to " << config.out_dir << "\n";
    return kExitOk;
}

int cmd_curriculum(const CommonFlags& flags) {
    const auto config = resolve_config(flags);
    if (config.dataset_path.empty()) throw ConfigError("curriculum: dataset.path required");
    const auto series = load_csv(config.dataset_path, config.schema);
    const auto parts = split(series, config.split);
    const auto windows = make_windows(parts.train, config.window);

    models::ExternalModelRegistry externals;
    for (const auto& [name, ep] : config.external_endpoints)
        externals.register_endpoint(name, ep);

    std::vector<curriculum::DifficultyProfile> profiles;
    profiles.reserve(windows.size());
    for (const auto& w : windows)
        profiles.push_back(
            curriculum::score_window(w, config.curriculum, config.dataset_id, &externals));

    const bool degenerate = curriculum::assign_bands(profiles);
    if (degenerate)
        std::cerr << "warning: degenerate difficulty distribution, all samples in band 1\n";
    std::size_t unscorable = 0;
    for (const auto& p : profiles)
        if (!p.scorable) {
            ++unscorable;
            std::cerr << "unscorable window origin=" << p.origin_index << ": " << p.note << "\n";
        }

    const auto order = curriculum::schedule_order(profiles, config.seed,
                                                  config.curriculum.epochs_per_stage);
    fs::create_directories(config.out_dir);
    const fs::path manifest_path = fs::path(config.out_dir) / "curriculum_manifest.jsonl";
    std::ofstream out(manifest_path);
    out << curriculum::manifest_lines(profiles, order);
    std::ofstream cfg(fs::path(config.out_dir) / "config_resolved.json");
    cfg << config.resolved().dump(2) << "\n";

    std::cout << "scored " << profiles.size() << " windows (" << unscorable
              << " unscorable), manifest written to " << manifest_path.string() << "\n";
    return kExitOk;
}

int cmd_reward(const CommonFlags& flags, const std::string& forecast_path,
               const std::string& truth_path) {
    const auto config = resolve_config(flags);
    const Matrix forecast = matrix_from_csv_or_json(forecast_path);
    const Matrix truth = matrix_from_csv_or_json(truth_path);

    reward::EpisodeRewardInputs in;
    in.forecast = &forecast;
    in.truth = &truth;
    in.horizon = truth.rows();
    in.period = config.window.seasonal_period;
    in.turning_tolerance = config.episode.turning_tolerance;
    in.extrema_neighborhood = config.episode.toolkit.extrema_neighborhood;
    in.answer_length_delta =
        static_cast<long>(forecast.rows()) - static_cast<long>(truth.rows());
    const auto breakdown =
        reward::total_reward(in, config.episode.weights, config.episode.reward_switches);

    nlohmann::ordered_json j = breakdown.to_json();
    j["mse"] = eval::mse(forecast.slice_rows(0, std::min(forecast.rows(), truth.rows())),
                         truth.slice_rows(0, std::min(forecast.rows(), truth.rows())));
    j["mae"] = eval::mae(forecast.slice_rows(0, std::min(forecast.rows(), truth.rows())),
                         truth.slice_rows(0, std::min(forecast.rows(), truth.rows())));
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_serve(const CommonFlags& flags, const std::string& host, int port) {
    const auto config = resolve_config(flags);
    eval::ServeConfig serve;
    serve.toolkit = config.episode.toolkit;
    serve.default_seasonal_period = config.window.seasonal_period;
    serve.default_model = models::ForecastModelId::seasonal_naive(config.window.seasonal_period);

    httplib::Server server;
    eval::configure_tool_server(server, serve);
    std::cout << "serving toolkit + predict_time_series on http://" << host << ":" << port
              << "\n";
    if (!server.listen(host, port))
        throw TransportError("serve-tools: failed to bind " + host + ":" + std::to_string(port));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic environment for tool-augmented, multi-turn time series "
                 "forecasting agents"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* ingest = app.add_subcommand("ingest", "Validate and summarize a dataset");
    add_common(ingest, flags);

    auto* analyze = app.add_subcommand("analyze", "Run one diagnostic tool on a window");
    std::string tool = "extract_basic_statistics";
    std::string channel;
    std::size_t origin = 0;
    add_common(analyze, flags);
    analyze->add_option("--tool", tool, "Registry tool name")->required();
    analyze->add_option("--channel", channel, "Channel for channel-scoped tools");
    analyze->add_option("--origin", origin, "Window origin index (default 0)");

    auto* episode = app.add_subcommand("episode", "Run a single episode and write its trace");
    bool use_test_split = false;
    add_common(episode, flags);
    episode->add_option("--origin", origin, "Window origin index (default 0)");
    episode->add_flag("--test-split", use_test_split, "Index windows within the test split");

    auto* batch = app.add_subcommand("batch", "Run one episode per test window and report");
    add_common(batch, flags);

    auto* curriculum =
        app.add_subcommand("curriculum", "Score, band, and schedule training windows");
    add_common(curriculum, flags);

    auto* reward_cmd =
        app.add_subcommand("reward", "Score a forecast file against a truth file");
    std::string forecast_path, truth_path;
    add_common(reward_cmd, flags);
    reward_cmd->add_option("--forecast", forecast_path, "Forecast CSV/JSON")->required();
    reward_cmd->add_option("--truth", truth_path, "Ground-truth CSV/JSON")->required();

    auto* serve = app.add_subcommand("serve-tools",
                                     "Expose the toolkit and predict_time_series over HTTP");
    std::string host = "127.0.0.1";
    int port = 8080;
    add_common(serve, flags);
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Bind port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(flags);
        if (app.got_subcommand(analyze)) return cmd_analyze(flags, tool, channel, origin);
        if (app.got_subcommand(episode)) return cmd_episode(flags, origin, use_test_split);
        if (app.got_subcommand(batch)) return cmd_batch(flags);
        if (app.got_subcommand(curriculum)) return cmd_curriculum(flags);
        if (app.got_subcommand(reward_cmd)) return cmd_reward(flags, forecast_path, truth_path);
        if (app.got_subcommand(serve)) return cmd_serve(flags, host, port);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitConfig;
}
