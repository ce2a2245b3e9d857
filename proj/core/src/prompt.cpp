#include "tsagent/prompt.hpp"

#include <cstdio>

#include "tsagent/series.hpp"

namespace tsagent::agent {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string format_value(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

std::string one_line(std::string s) {
    for (auto& ch : s)
        if (ch == '\n' || ch == '\r') ch = ' ';
    return s;
}

std::string contract_for(Stage stage, std::size_t horizon) {
    switch (stage) {
        case Stage::FeatureExtraction:
            return "Respond with one or more tool calls, one JSON document per line: "
                   "{\"name\": <allowed action>, \"arguments\": {...}}. "
                   "Do NOT call prediction functions in this turn.";
        case Stage::Prediction:
            return "Respond with exactly one prediction call: "
                   "{\"name\": \"predict_time_series\", \"arguments\": {\"model\": ...}}.";
        case Stage::ReflectOutput:
            return "Respond with ONLY the following tags and no surrounding text: "
                   "<think>your reflection</think><answer>one line per forecast step, "
                   "exactly " +
                   std::to_string(horizon) +
                   " lines, each 'value[,value...]' or 'timestamp,value[,value...]'</answer>.";
    }
    return "";
}

}  // namespace

std::string PromptBundle::render() const {
    std::string out;
    out += "[stage] " + to_string(stage) + "\n";
    out += "[turn] " + std::to_string(turn) + "\n";
    if (!correction.empty()) out += "[correction] " + one_line(correction) + "\n";
    out += "[frequency_seconds] " + std::to_string(frequency_seconds) + "\n";
    out += "[seasonal_period] " + std::to_string(seasonal_period) + "\n";
    out += "[lookback] " + std::to_string(full_length) + "\n";
    out += "[horizon] " + std::to_string(horizon) + "\n";
    out += "[channels] " + join(channel_names, ",") + "\n";
    out += "[target_channels] " + join(target_channels, ",") + "\n";

    out += "[history] " + std::to_string(history_view.rows()) + " of " +
           std::to_string(full_length) + " steps" +
           (truncated ? " (truncated to most recent)" : " (full)") + "\n";
    for (std::size_t r = 0; r < history_view.rows(); ++r) {
        const std::int64_t ts =
            start_timestamp +
            static_cast<std::int64_t>(history_offset + r) * frequency_seconds;
        out += format_timestamp(ts);
        out += ' ';
        for (std::size_t c = 0; c < history_view.cols(); ++c) {
            if (c) out += ',';
            out += format_value(history_view(r, c), value_decimals);
        }
        out += '\n';
    }

    if (stage != Stage::FeatureExtraction) {
        out += "[analysis_history] " + std::to_string(injected_analysis.size()) + " entries\n";
        for (const auto& a : injected_analysis) out += a + "\n";
    }
    if (stage == Stage::ReflectOutput) {
        out += "[prediction_results] " + std::to_string(injected_predictions.size()) +
               " entries\n";
        for (const auto& p : injected_predictions) out += p + "\n";
    }

    out += "[allowed_actions] " + join(allowed_actions, ",") + "\n";
    out += "[output_contract] " + output_contract + "\n";
    return out;
}

PromptBundle assemble_prompt(const Memory& memory, const Window& window,
                             const PromptConfig& config, int turn,
                             const AblationFlags& ablation, const std::string& correction) {
    PromptBundle b;
    b.stage = detect_stage(memory);
    b.turn = turn;
    b.correction = correction;
    b.channel_names = window.channel_names;
    b.target_channels = window.target_names();
    b.frequency_seconds = window.frequency_seconds;
    b.start_timestamp = window.start_timestamp;
    b.horizon = window.horizon();
    b.seasonal_period = window.spec.seasonal_period;
    b.full_length = window.history.rows();
    b.value_decimals = config.value_decimals;

    if (b.stage == Stage::ReflectOutput && config.trunc_len < window.history.rows()) {
        b.history_offset = window.history.rows() - config.trunc_len;
        b.history_view = window.history.slice_rows(b.history_offset, config.trunc_len);
        b.truncated = true;
    } else {
        b.history_view = window.history;
    }

    if (b.stage != Stage::FeatureExtraction)
        for (const auto& a : memory.analysis_history())
            b.injected_analysis.push_back(a.to_json().dump());
    if (b.stage == Stage::ReflectOutput)
        for (const auto& p : memory.prediction_results())
            b.injected_predictions.push_back(p.to_json().dump());

    b.allowed_actions = stage_whitelist(b.stage, ablation);
    b.output_contract = contract_for(b.stage, b.horizon);
    return b;
}

}  // namespace tsagent::agent
