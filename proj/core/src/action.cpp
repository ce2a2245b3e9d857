#include "tsagent/action.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>

#include "tsagent/series.hpp"
#include "tsagent/toolkit.hpp"

namespace tsagent::agent {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

/// Balanced top-level {...} spans, string/escape aware.
std::vector<std::string> json_object_spans(const std::string& text) {
    std::vector<std::string> spans;
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (ch == '\\')
                escaped = true;
            else if (ch == '"')
                in_string = false;
            continue;
        }
        if (ch == '"') {
            in_string = true;
        } else if (ch == '{') {
            if (depth == 0) start = i;
            ++depth;
        } else if (ch == '}') {
            if (depth > 0 && --depth == 0) spans.push_back(text.substr(start, i - start + 1));
        }
    }
    return spans;
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && errno != ERANGE;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

bool find_tag(const std::string& text, const std::string& open, const std::string& close,
              std::size_t& begin, std::size_t& end) {
    const std::size_t a = text.find(open);
    if (a == std::string::npos) return false;
    const std::size_t b = text.find(close, a + open.size());
    if (b == std::string::npos) return false;
    begin = a;
    end = b + close.size();
    return true;
}

ParseOutcome parse_final_answer(const std::string& raw, const AnswerContract& contract) {
    ParseOutcome out;
    Action act;
    act.kind = ActionKind::FinalAnswer;
    act.raw_text = raw;

    std::size_t think_begin = 0, think_end = 0, answer_begin = 0, answer_end = 0;
    const bool has_think = find_tag(raw, "<think>", "</think>", think_begin, think_end);
    if (!find_tag(raw, "<answer>", "</answer>", answer_begin, answer_end)) {
        out.error = ParseError{ParseFailure::MalformedAnswer, "unterminated <answer> tag"};
        return out;
    }
    if (has_think)
        act.think_text = raw.substr(think_begin + 7, think_end - think_begin - 7 - 8);
    const std::string body =
        raw.substr(answer_begin + 8, answer_end - answer_begin - 8 - 9);

    // Tags-only contract: <think> then <answer>, nothing but whitespace around.
    bool tags_only = has_think && think_end <= answer_begin;
    if (tags_only) {
        const std::string before = raw.substr(0, think_begin);
        const std::string between = raw.substr(think_end, answer_begin - think_end);
        const std::string after = raw.substr(answer_end);
        tags_only = trim(before).empty() && trim(between).empty() && trim(after).empty();
    }
    act.format_valid = tags_only;

    // One line per step: "v[,v...]" or "timestamp,v[,v...]".
    std::vector<std::vector<double>> rows;
    std::vector<std::int64_t> row_timestamps;
    std::string line;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t nl = body.find('\n', pos);
        line = nl == std::string::npos ? body.substr(pos) : body.substr(pos, nl - pos);
        pos = nl == std::string::npos ? body.size() + 1 : nl + 1;
        const std::string t = trim(line);
        if (t.empty()) continue;

        auto fields = split_fields(t);
        bool with_timestamp = false;
        if (fields.size() == contract.channels + 1) {
            double ignored;
            if (parse_double(fields[0], ignored)) {
                out.error = ParseError{ParseFailure::MalformedAnswer,
                                       "row has " + std::to_string(fields.size()) +
                                           " numeric fields, expected " +
                                           std::to_string(contract.channels)};
                return out;
            }
            with_timestamp = true;
        } else if (fields.size() != contract.channels) {
            out.error = ParseError{ParseFailure::MalformedAnswer,
                                   "row has " + std::to_string(fields.size()) +
                                       " fields, expected " + std::to_string(contract.channels) +
                                       " values (or timestamp + values)"};
            return out;
        }

        if (with_timestamp) {
            std::int64_t ts = 0;
            try {
                ts = parse_timestamp(trim(fields[0]));
            } catch (const std::exception&) {
                out.error =
                    ParseError{ParseFailure::MalformedAnswer, "unparseable timestamp in answer"};
                return out;
            }
            row_timestamps.push_back(ts);
            act.had_timestamps = true;
        }

        std::vector<double> values;
        for (std::size_t f = with_timestamp ? 1 : 0; f < fields.size(); ++f) {
            double v;
            if (!parse_double(fields[f], v)) {
                out.error =
                    ParseError{ParseFailure::MalformedAnswer, "non-numeric answer value"};
                return out;
            }
            values.push_back(v);
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) {
        out.error = ParseError{ParseFailure::MalformedAnswer, "empty <answer> body"};
        return out;
    }

    // Timestamps, when present, must extend the window timeline.
    if (act.had_timestamps) {
        if (row_timestamps.size() != rows.size()) {
            act.timestamps_valid = false;
        } else {
            for (std::size_t i = 0; i < row_timestamps.size(); ++i) {
                const std::int64_t expected =
                    contract.first_step_timestamp +
                    static_cast<std::int64_t>(i) * contract.frequency_seconds;
                if (row_timestamps[i] != expected) act.timestamps_valid = false;
            }
        }
        if (!act.timestamps_valid) act.format_valid = false;
    }

    act.answer_values = Matrix::from_rows(rows);
    act.answer_length_delta =
        static_cast<long>(rows.size()) - static_cast<long>(contract.horizon);
    out.actions.push_back(std::move(act));
    return out;
}

}  // namespace

std::string to_string(ParseFailure f) {
    switch (f) {
        case ParseFailure::NoActionFound: return "no-action-found";
        case ParseFailure::UnknownTool: return "unknown-tool";
        case ParseFailure::MalformedAnswer: return "malformed-answer";
    }
    return "?";
}

ParseOutcome parse_action(const std::string& raw_text, Stage stage,
                          const AnswerContract& contract) {
    (void)stage;  // recognition is stage-independent; stages gate via validate_action

    if (raw_text.find("<answer>") != std::string::npos)
        return parse_final_answer(raw_text, contract);

    ParseOutcome out;
    for (const auto& span : json_object_spans(raw_text)) {
        nlohmann::json doc = nlohmann::json::parse(span, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) continue;
        if (!doc.contains("name") || !doc["name"].is_string()) continue;
        const std::string name = doc["name"].get<std::string>();

        bool registered = false;
        for (const auto& spec : toolkit::tool_registry())
            if (spec.name == name) registered = true;
        if (!registered) {
            out.actions.clear();
            out.error = ParseError{ParseFailure::UnknownTool, "unknown tool '" + name + "'"};
            return out;
        }

        Action act;
        act.kind = name == "predict_time_series" ? ActionKind::ModelCall : ActionKind::ToolCall;
        act.tool_name = name;
        act.arguments =
            doc.contains("arguments") ? doc["arguments"] : nlohmann::json::object();
        act.raw_text = raw_text;
        out.actions.push_back(std::move(act));
    }
    if (out.actions.empty())
        out.error = ParseError{ParseFailure::NoActionFound,
                               "no tool call or <answer> found in response"};
    return out;
}

std::vector<std::string> stage_whitelist(Stage stage, const AblationFlags& ablation) {
    std::vector<std::string> out;
    switch (stage) {
        case Stage::FeatureExtraction:
            if (!ablation.disable_feature_tools)
                for (const auto& spec : toolkit::tool_registry())
                    if (spec.stage == toolkit::ToolStage::FeatureExtraction)
                        out.push_back(spec.name);
            break;
        case Stage::Prediction:
            if (!ablation.disable_model_tools) out.emplace_back("predict_time_series");
            break;
        case Stage::ReflectOutput:
            out.emplace_back("final_answer");
            break;
    }
    return out;
}

std::optional<Violation> validate_action(const Action& action, Stage stage,
                                         const AblationFlags& ablation) {
    switch (action.kind) {
        case ActionKind::ToolCall: {
            if (stage != Stage::FeatureExtraction)
                return Violation{"tool-call-stage", "diagnostic tool '" + action.tool_name +
                                                        "' called at " + to_string(stage) +
                                                        " stage"};
            const auto allowed = stage_whitelist(stage, ablation);
            for (const auto& name : allowed)
                if (name == action.tool_name) return std::nullopt;
            return Violation{"tool-not-allowed",
                             "tool '" + action.tool_name + "' is not admissible at this stage"};
        }
        case ActionKind::ModelCall: {
            if (stage != Stage::Prediction)
                return Violation{"prediction-stage",
                                 "prediction call at " + to_string(stage) + " stage"};
            if (ablation.disable_model_tools)
                return Violation{"model-tools-disabled",
                                 "prediction tools are disabled in this run"};
            return std::nullopt;
        }
        case ActionKind::FinalAnswer: {
            if (stage != Stage::ReflectOutput)
                return Violation{"final-answer-stage",
                                 "final answer at " + to_string(stage) + " stage"};
            return std::nullopt;
        }
    }
    return Violation{"unknown-action", "unrecognized action kind"};
}

}  // namespace tsagent::agent
