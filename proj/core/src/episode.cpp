#include "tsagent/episode.hpp"

#include <chrono>

#include "tsagent/errors.hpp"
#include "tsagent/stats.hpp"

namespace tsagent::agent {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::ordered_json matrix_json(const Matrix& m) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            if (is_missing(v))
                row.push_back(nullptr);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::ordered_json action_summary(const Action& a, bool executed) {
    nlohmann::ordered_json j;
    switch (a.kind) {
        case ActionKind::ToolCall:
            j["kind"] = "tool_call";
            j["tool_name"] = a.tool_name;
            j["arguments"] = a.arguments;
            break;
        case ActionKind::ModelCall:
            j["kind"] = "model_call";
            j["tool_name"] = a.tool_name;
            j["arguments"] = a.arguments;
            break;
        case ActionKind::FinalAnswer:
            j["kind"] = "final_answer";
            j["rows"] = a.answer_values.rows();
            j["format_valid"] = a.format_valid;
            j["answer_length_delta"] = a.answer_length_delta;
            j["had_timestamps"] = a.had_timestamps;
            break;
    }
    j["executed"] = executed;
    return j;
}

nlohmann::ordered_json violation_json(const std::string& rule, const std::string& message) {
    nlohmann::ordered_json j;
    j["rule"] = rule;
    j["message"] = message;
    return j;
}

nlohmann::ordered_json window_ref_json(const Window& w) {
    nlohmann::ordered_json j;
    j["origin_index"] = w.origin_index;
    j["lookback"] = w.spec.lookback;
    j["horizon"] = w.spec.horizon;
    j["seasonal_period"] = w.spec.seasonal_period;
    j["target_channels"] = w.target_names();
    j["frequency_seconds"] = w.frequency_seconds;
    j["start_timestamp"] = w.start_timestamp;
    return j;
}

}  // namespace

std::string to_string(EpisodeStatus status) {
    switch (status) {
        case EpisodeStatus::Completed: return "completed";
        case EpisodeStatus::FailedFormat: return "failed_format";
        case EpisodeStatus::FailedTransport: return "failed_transport";
    }
    return "?";
}

int EpisodeTrace::functional_turns() const {
    int n = 0;
    for (const auto& t : turns) {
        for (const auto& a : t.actions)
            if (a.contains("executed") && a["executed"].get<bool>()) {
                ++n;
                break;
            }
    }
    return n;
}

std::size_t EpisodeTrace::violation_count() const {
    std::size_t n = 0;
    for (const auto& t : turns) n += t.violations.size();
    return n;
}

nlohmann::ordered_json EpisodeTrace::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["window"] = window_ref;
    j["seed"] = seed;
    auto turns_json = nlohmann::ordered_json::array();
    for (const auto& t : turns) {
        nlohmann::ordered_json tj;
        tj["turn"] = t.turn;
        tj["stage"] = to_string(t.stage);
        tj["prompt_digest"] = t.prompt_digest;
        tj["prompt_chars"] = t.prompt_chars;
        tj["raw_response"] = t.raw_response;
        tj["actions"] = t.actions;
        tj["tool_results"] = t.tool_results;
        tj["violations"] = t.violations;
        if (include_timing) tj["wall_ms"] = t.wall_ms;
        turns_json.push_back(std::move(tj));
    }
    j["turns"] = std::move(turns_json);

    nlohmann::ordered_json outcome;
    outcome["status"] = to_string(status);
    if (final_forecast)
        outcome["final_forecast"] = matrix_json(*final_forecast);
    else
        outcome["final_forecast"] = nullptr;
    if (failure_detail) outcome["failure_detail"] = *failure_detail;
    j["outcome"] = std::move(outcome);

    if (reward)
        j["reward"] = reward->to_json();
    else
        j["reward"] = nullptr;
    if (include_timing) j["total_wall_ms"] = total_wall_ms;
    return j;
}

std::string EpisodeTrace::serialize(bool include_timing) const {
    return to_json(include_timing).dump(2) + "\n";
}

EpisodeTrace run_episode(const Window& window, Policy& policy, const EpisodeConfig& config) {
    config.weights.validate();
    const auto episode_start = Clock::now();

    EpisodeTrace trace;
    trace.window_ref = window_ref_json(window);
    trace.seed = config.seed;

    Memory memory(config.ablation.disable_feature_tools);
    AnswerContract contract;
    contract.horizon = window.horizon();
    contract.channels = window.target_names().size();
    contract.frequency_seconds = window.frequency_seconds;
    contract.first_step_timestamp = window.timestamp_at(window.lookback());

    std::string correction;
    std::size_t retries_used = 0;
    std::optional<Action> final_action;
    std::optional<long> final_tokens;

    const std::size_t functional_stages = config.ablation.disable_feature_tools ? 2 : 3;
    const std::size_t max_turns = functional_stages + config.max_retries;

    for (int turn = 1; static_cast<std::size_t>(turn) <= max_turns; ++turn) {
        const Stage stage = detect_stage(memory);
        const PromptBundle bundle = assemble_prompt(memory, window, config.prompt, turn,
                                                    config.ablation, correction);
        correction.clear();
        const std::string rendered = bundle.render();

        TurnRecord rec;
        rec.turn = turn;
        rec.stage = stage;
        rec.prompt_digest = stats::fnv1a64_hex(rendered);
        rec.prompt_chars = rendered.size();
        const auto turn_start = Clock::now();

        PolicyResponse response;
        try {
            response = policy.respond(rendered);
        } catch (const TransportError& e) {
            trace.status = EpisodeStatus::FailedTransport;
            trace.failure_detail = e.what();
            memory.log_action({turn, "failure", e.what()});
            rec.wall_ms = elapsed_ms(turn_start);
            trace.turns.push_back(std::move(rec));
            break;
        }
        rec.raw_response = response.text;

        auto fail_turn = [&](const std::string& rule, const std::string& message,
                             const std::string& kind) {
            rec.violations.push_back(violation_json(rule, message));
            memory.log_action({turn, kind, rule + ": " + message});
            correction = "Previous response rejected (" + rule + "): " + message +
                         " Follow the output contract for this stage.";
            ++retries_used;
        };

        const ParseOutcome parsed = parse_action(response.text, stage, contract);
        if (!parsed.ok()) {
            fail_turn(to_string(parsed.error->failure), parsed.error->message, "parse_error");
            rec.wall_ms = elapsed_ms(turn_start);
            trace.turns.push_back(std::move(rec));
            if (retries_used > config.max_retries) break;
            continue;
        }

        // Whole-turn admission: nothing executes unless every parsed action is
        // valid for the current stage and the per-stage arity holds.
        std::optional<Violation> violation;
        for (const auto& action : parsed.actions) {
            violation = validate_action(action, stage, config.ablation);
            if (violation) break;
        }
        if (!violation && stage != Stage::FeatureExtraction && parsed.actions.size() != 1)
            violation = Violation{"single-action",
                                  "exactly one action is admissible at " + to_string(stage) +
                                      " stage, got " + std::to_string(parsed.actions.size())};

        if (violation) {
            for (const auto& action : parsed.actions)
                rec.actions.push_back(action_summary(action, false));
            fail_turn(violation->rule, violation->message, "violation");
            rec.wall_ms = elapsed_ms(turn_start);
            trace.turns.push_back(std::move(rec));
            if (retries_used > config.max_retries) break;
            continue;
        }

        if (stage == Stage::FeatureExtraction) {
            // Stage all results first so a mid-list failure leaves memory untouched.
            std::vector<toolkit::ToolResult> staged;
            std::string failure;
            for (const auto& action : parsed.actions) {
                try {
                    auto result =
                        toolkit::run_tool(action.tool_name, action.arguments, window, config.toolkit);
                    result.produced_at_turn = turn;
                    staged.push_back(std::move(result));
                } catch (const std::exception& e) {
                    failure = "tool '" + action.tool_name + "' failed: " + e.what();
                    break;
                }
            }
            if (!failure.empty()) {
                for (const auto& action : parsed.actions)
                    rec.actions.push_back(action_summary(action, false));
                fail_turn("tool-execution", failure, "violation");
                rec.wall_ms = elapsed_ms(turn_start);
                trace.turns.push_back(std::move(rec));
                if (retries_used > config.max_retries) break;
                continue;
            }
            for (std::size_t i = 0; i < parsed.actions.size(); ++i) {
                rec.actions.push_back(action_summary(parsed.actions[i], true));
                rec.tool_results.push_back(staged[i].to_json());
                memory.log_action({turn, "tool_call", parsed.actions[i].tool_name});
                memory.write_analysis(std::move(staged[i]));
            }
        } else if (stage == Stage::Prediction) {
            const Action& action = parsed.actions.front();
            try {
                const auto model = models::ForecastModelId::from_json(action.arguments);
                auto forecast =
                    models::predict_time_series(model, window, window.horizon(), config.externals);
                PredictionRecord record{model, std::move(forecast), turn};
                rec.actions.push_back(action_summary(action, true));
                rec.tool_results.push_back(record.to_json());
                memory.log_action({turn, "model_call", model.to_string()});
                memory.write_prediction(std::move(record));
            } catch (const std::exception& e) {
                rec.actions.push_back(action_summary(action, false));
                fail_turn("model-failure", e.what(), "violation");
                rec.wall_ms = elapsed_ms(turn_start);
                trace.turns.push_back(std::move(rec));
                if (retries_used > config.max_retries) break;
                continue;
            }
        } else {
            final_action = parsed.actions.front();
            final_tokens = response.completion_tokens;
            rec.actions.push_back(action_summary(*final_action, true));
            memory.log_action({turn, "final_answer",
                               "rows=" + std::to_string(final_action->answer_values.rows())});
            trace.status = EpisodeStatus::Completed;
            rec.wall_ms = elapsed_ms(turn_start);
            trace.turns.push_back(std::move(rec));
            break;
        }

        rec.wall_ms = elapsed_ms(turn_start);
        trace.turns.push_back(std::move(rec));
    }

    if (trace.status == EpisodeStatus::Completed && final_action) {
        trace.final_forecast = final_action->answer_values;
    } else if (trace.status != EpisodeStatus::FailedTransport) {
        trace.status = EpisodeStatus::FailedFormat;
        if (!trace.failure_detail)
            trace.failure_detail = "no final answer within " + std::to_string(max_turns) +
                                   " turns (" + std::to_string(retries_used) + " retries used)";
    }

    // Reward is emitted exactly once, at episode end. Unscorable cases:
    // no ground truth, or a transport failure (infrastructure, not policy).
    if (window.target && trace.status != EpisodeStatus::FailedTransport) {
        reward::EpisodeRewardInputs in;
        in.truth = &*window.target;
        in.period = window.spec.seasonal_period;
        in.horizon = window.horizon();
        in.turning_tolerance = config.turning_tolerance;
        in.extrema_neighborhood = config.toolkit.extrema_neighborhood;
        if (final_action) {
            in.forecast = &final_action->answer_values;
            in.format_valid = final_action->format_valid;
            in.answer_length_delta = final_action->answer_length_delta;
            in.response_tokens = final_tokens;
        } else {
            in.forecast = nullptr;
            in.format_valid = false;  // episode produced no valid final output
        }
        trace.reward = reward::total_reward(in, config.weights, config.reward_switches);
    }

    trace.total_wall_ms = elapsed_ms(episode_start);
    return trace;
}

}  // namespace tsagent::agent
