#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsagent/action.hpp"
#include "tsagent/external_model.hpp"
#include "tsagent/memory.hpp"
#include "tsagent/policy.hpp"
#include "tsagent/prompt.hpp"
#include "tsagent/reward.hpp"
#include "tsagent/toolkit.hpp"
#include "tsagent/window.hpp"

namespace tsagent::agent {

struct EpisodeConfig {
    /// Retry turns granted on violations, parse errors, and tool/model
    /// failures. Three functional stages plus this bound the episode length.
    std::size_t max_retries = 2;
    PromptConfig prompt;
    toolkit::ToolkitConfig toolkit;
    AblationFlags ablation;
    reward::RewardWeights weights;
    reward::RewardSwitches reward_switches;
    std::size_t turning_tolerance = 2;
    unsigned long long seed = 0;  // recorded in the trace
    /// Wall-clock fields are emitted only when set; traces stay byte-
    /// deterministic by default.
    bool include_timing = false;
    const models::ExternalModelRegistry* externals = nullptr;
};

enum class EpisodeStatus { Completed, FailedFormat, FailedTransport };
std::string to_string(EpisodeStatus status);

struct TurnRecord {
    int turn = 0;
    Stage stage = Stage::FeatureExtraction;
    std::string prompt_digest;
    std::size_t prompt_chars = 0;
    std::string raw_response;
    std::vector<nlohmann::ordered_json> actions;       // parsed summaries with executed flag
    std::vector<nlohmann::ordered_json> tool_results;  // documents written to memory this turn
    std::vector<nlohmann::ordered_json> violations;
    double wall_ms = 0.0;
};

struct EpisodeTrace {
    static constexpr int kSchemaVersion = 1;

    nlohmann::ordered_json window_ref;
    unsigned long long seed = 0;
    std::vector<TurnRecord> turns;
    EpisodeStatus status = EpisodeStatus::FailedFormat;
    std::optional<Matrix> final_forecast;
    std::optional<std::string> failure_detail;
    std::optional<reward::RewardBreakdown> reward;  // absent = unscored
    double total_wall_ms = 0.0;

    int functional_turns() const;
    std::size_t violation_count() const;

    nlohmann::ordered_json to_json(bool include_timing) const;
    std::string serialize(bool include_timing = false) const;
};

/// Drives a policy through the three-stage protocol: assemble prompt, query,
/// parse, validate, execute; violations re-prompt with a correction notice and
/// consume a retry. Terminates on a final answer (reward computed once, at the
/// end, when ground truth is present) or when the turn budget is exhausted.
EpisodeTrace run_episode(const Window& window, Policy& policy, const EpisodeConfig& config);

}  // namespace tsagent::agent
