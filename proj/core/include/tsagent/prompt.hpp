#pragma once

#include <string>
#include <vector>

#include "tsagent/action.hpp"
#include "tsagent/memory.hpp"
#include "tsagent/window.hpp"

namespace tsagent::agent {

struct PromptConfig {
    /// History steps shown at the reflect/output stage.
    std::size_t trunc_len = 48;
    /// Decimal places for raw history values in prompts. Injected analysis and
    /// prediction documents keep full round-trip precision.
    int value_decimals = 4;
};

/// Everything the policy sees at one turn. render() is deterministic: byte-
/// identical inputs produce byte-identical text.
struct PromptBundle {
    Stage stage = Stage::FeatureExtraction;
    int turn = 1;

    Matrix history_view;             // all channels
    std::size_t history_offset = 0;  // first shown step, in window coordinates
    std::size_t full_length = 0;
    bool truncated = false;

    std::vector<std::string> injected_analysis;     // present iff stage >= Prediction
    std::vector<std::string> injected_predictions;  // present iff stage == ReflectOutput
    std::vector<std::string> allowed_actions;
    std::string output_contract;
    std::string correction;  // violation notice carried from the previous turn

    // Window metadata needed to render and to act.
    std::vector<std::string> channel_names;
    std::vector<std::string> target_channels;
    std::int64_t frequency_seconds = 1;
    std::int64_t start_timestamp = 0;
    std::size_t horizon = 0;
    std::size_t seasonal_period = 0;
    int value_decimals = 4;

    std::string render() const;
};

/// Stage-aware prompt assembly: full history plus nothing at feature
/// extraction, full history plus analysis at prediction, truncated history
/// plus analysis and predictions at reflect/output.
PromptBundle assemble_prompt(const Memory& memory, const Window& window,
                             const PromptConfig& config, int turn,
                             const AblationFlags& ablation = {},
                             const std::string& correction = {});

}  // namespace tsagent::agent
