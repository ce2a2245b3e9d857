#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsagent/matrix.hpp"
#include "tsagent/memory.hpp"

namespace tsagent::agent {

/// Environment-side ablation wiring. Disabling feature tools removes the
/// feature-extraction stage entirely (episodes start at Prediction); disabling
/// model tools empties the Prediction whitelist, so prediction calls violate.
struct AblationFlags {
    bool disable_feature_tools = false;
    bool disable_model_tools = false;
    bool disable_refine = false;
};

enum class ActionKind { ToolCall, ModelCall, FinalAnswer };

struct Action {
    ActionKind kind = ActionKind::ToolCall;

    // ToolCall / ModelCall
    std::string tool_name;
    nlohmann::json arguments = nlohmann::json::object();

    // FinalAnswer
    std::string think_text;
    Matrix answer_values;  // rows x C_target as parsed, never padded or trimmed
    bool had_timestamps = false;
    bool timestamps_valid = true;
    bool format_valid = true;        // tags-only contract (and timestamp timeline)
    long answer_length_delta = 0;    // parsed rows - horizon

    std::string raw_text;  // verbatim policy output this action was parsed from
};

enum class ParseFailure { NoActionFound, UnknownTool, MalformedAnswer };
std::string to_string(ParseFailure f);

struct ParseError {
    ParseFailure failure = ParseFailure::NoActionFound;
    std::string message;
};

struct ParseOutcome {
    std::vector<Action> actions;
    std::optional<ParseError> error;
    bool ok() const { return !error.has_value(); }
};

/// What a final answer must look like for the current window.
struct AnswerContract {
    std::size_t horizon = 0;
    std::size_t channels = 1;
    std::int64_t first_step_timestamp = 0;  // timestamp of forecast step 0
    std::int64_t frequency_seconds = 1;
};

/// Recognizes structured tool-call documents ({"name":..., "arguments":...},
/// one or more) and <think>/<answer> final answers. Stage only affects flags,
/// never which shapes are recognized, so out-of-stage actions surface as
/// violations rather than parse errors.
ParseOutcome parse_action(const std::string& raw_text, Stage stage,
                          const AnswerContract& contract);

struct Violation {
    std::string rule;
    std::string message;
};

/// Stage whitelist check. Returns the violated rule, or nullopt when the
/// action is admissible at this stage.
std::optional<Violation> validate_action(const Action& action, Stage stage,
                                         const AblationFlags& ablation = {});

/// The admissible action names per stage; pairwise disjoint across stages.
std::vector<std::string> stage_whitelist(Stage stage, const AblationFlags& ablation = {});

}  // namespace tsagent::agent
