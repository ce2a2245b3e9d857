#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "tsagent/action.hpp"
#include "tsagent/csv.hpp"
#include "tsagent/curriculum.hpp"
#include "tsagent/episode.hpp"
#include "tsagent/policy.hpp"
#include "tsagent/remote_policy.hpp"
#include "tsagent/split.hpp"
#include "tsagent/window.hpp"

namespace tsagent::eval {

/// Fully resolved run settings. Sources, in precedence order: built-in
/// defaults < config file (flat `key = value` lines, dotted keys, `#`
/// comments) < environment variables (llm.* keys, e.g. TSAGENT_LLM_ENDPOINT)
/// < command-line overrides. Every run serializes its resolved config next to
/// its outputs.
struct RunConfig {
    // dataset.*
    std::string dataset_path;
    std::string dataset_id = "dataset";
    CsvSchema schema;

    // window.*
    WindowSpec window;

    // split.*
    SplitRatios split;

    // policy.*: "scripted" or "remote"
    std::string policy_kind = "scripted";
    agent::ScriptedPolicyConfig scripted;
    agent::RemoteEndpointConfig llm;

    // episode.*, toolkit.*, reward.*, ablation.*
    agent::EpisodeConfig episode;

    // curriculum.*
    curriculum::CurriculumConfig curriculum;

    // run.*
    unsigned long long seed = 0;
    std::string out_dir = "out";
    std::size_t subsample_stride = 1;  // evaluate every n-th test window
    std::size_t workers = 1;
    bool include_timing = false;

    // models.external.<name>.url / .timeout_ms
    std::map<std::string, models::ExternalEndpoint> external_endpoints;

    /// Every resolved key and value, for run metadata and golden asserts.
    nlohmann::ordered_json resolved() const;
};

/// Raw key-value view of a config file plus environment overrides.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a RunConfig from raw key-value pairs (validates and applies
/// defaults). Unknown keys raise ConfigError.
RunConfig build_run_config(const std::map<std::string, std::string>& kv);

/// read_config_file + environment overrides + build.
RunConfig load_run_config(const std::string& path);

}  // namespace tsagent::eval
