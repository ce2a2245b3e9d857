#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tsagent/models.hpp"
#include "tsagent/toolkit.hpp"

namespace tsagent::agent {

/// Functional phase of an episode, derived from memory contents only.
enum class Stage { FeatureExtraction, Prediction, ReflectOutput };
std::string to_string(Stage stage);

struct PredictionRecord {
    models::ForecastModelId model_id;
    models::Forecast forecast;
    int turn = 0;

    nlohmann::ordered_json to_json() const;
};

struct ActionLogEntry {
    int turn = 0;
    std::string kind;  // tool_call | model_call | final_answer | violation | parse_error | failure
    std::string detail;
};

/// Per-episode store of analysis history, prediction results, and the action
/// log. Append-only; entries carry the turn that produced them. One Memory per
/// episode, confined to that episode's worker.
class Memory {
public:
    Memory() = default;
    explicit Memory(bool feature_stage_skipped) : feature_stage_skipped_(feature_stage_skipped) {}

    const std::vector<toolkit::ToolResult>& analysis_history() const { return analysis_; }
    const std::vector<PredictionRecord>& prediction_results() const { return predictions_; }
    const std::vector<ActionLogEntry>& action_log() const { return log_; }
    bool feature_stage_skipped() const { return feature_stage_skipped_; }

    void write_analysis(toolkit::ToolResult result);
    void write_prediction(PredictionRecord record);
    void log_action(ActionLogEntry entry);

    nlohmann::ordered_json to_json() const;

private:
    std::vector<toolkit::ToolResult> analysis_;
    std::vector<PredictionRecord> predictions_;
    std::vector<ActionLogEntry> log_;
    bool feature_stage_skipped_ = false;
};

/// Stage from memory status: no analysis -> FeatureExtraction; analysis but no
/// prediction -> Prediction; both -> ReflectOutput. A memory with predictions
/// but no analysis is unreachable unless the feature stage was explicitly
/// skipped, and is rejected otherwise.
Stage detect_stage(const Memory& memory);

}  // namespace tsagent::agent
