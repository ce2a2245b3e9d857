#include "tsagent/memory.hpp"

#include <stdexcept>

namespace tsagent::agent {

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::FeatureExtraction: return "feature_extraction";
        case Stage::Prediction: return "prediction";
        case Stage::ReflectOutput: return "reflect_output";
    }
    return "?";
}

nlohmann::ordered_json PredictionRecord::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = model_id.to_json();
    j["turn"] = turn;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < forecast.values.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < forecast.values.cols(); ++c)
            row.push_back(forecast.values(r, c));
        rows.push_back(std::move(row));
    }
    j["forecast"] = std::move(rows);
    if (forecast.fit_notes) j["fit_notes"] = *forecast.fit_notes;
    return j;
}

void Memory::write_analysis(toolkit::ToolResult result) { analysis_.push_back(std::move(result)); }

void Memory::write_prediction(PredictionRecord record) {
    predictions_.push_back(std::move(record));
}

void Memory::log_action(ActionLogEntry entry) { log_.push_back(std::move(entry)); }

nlohmann::ordered_json Memory::to_json() const {
    nlohmann::ordered_json j;
    auto analysis = nlohmann::ordered_json::array();
    for (const auto& a : analysis_) analysis.push_back(a.to_json());
    j["analysis_history"] = std::move(analysis);
    auto preds = nlohmann::ordered_json::array();
    for (const auto& p : predictions_) preds.push_back(p.to_json());
    j["prediction_results"] = std::move(preds);
    auto log = nlohmann::ordered_json::array();
    for (const auto& e : log_) {
        nlohmann::ordered_json ej;
        ej["turn"] = e.turn;
        ej["kind"] = e.kind;
        ej["detail"] = e.detail;
        log.push_back(std::move(ej));
    }
    j["action_log"] = std::move(log);
    if (feature_stage_skipped_) j["feature_stage_skipped"] = true;
    return j;
}

Stage detect_stage(const Memory& memory) {
    const bool no_analysis = memory.analysis_history().empty();
    const bool no_predictions = memory.prediction_results().empty();
    if (no_analysis && !memory.feature_stage_skipped()) {
        if (!no_predictions)
            throw std::logic_error(
                "detect_stage: prediction results without analysis history");
        return Stage::FeatureExtraction;
    }
    return no_predictions ? Stage::Prediction : Stage::ReflectOutput;
}

}  // namespace tsagent::agent
