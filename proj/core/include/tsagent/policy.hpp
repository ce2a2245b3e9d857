#pragma once

#include <memory>
#include <optional>
#include <string>

namespace tsagent::agent {

struct PolicyResponse {
    std::string text;
    /// Completion token count when the transport reports one.
    std::optional<long> completion_tokens;
};

/// A policy maps a rendered prompt to raw response text. Implementations must
/// not mutate environment state and must be callable from multiple episode
/// workers at once.
class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyResponse respond(const std::string& rendered_prompt) = 0;
    virtual std::string name() const = 0;
};

struct ScriptedPolicyConfig {
    /// Trend strength |slope| * (n-1) / std above which Rise/Decline routes to Drift.
    double trend_threshold = 1.0;
    /// Permutation entropy above which the series counts as irregular.
    double entropy_threshold = 0.75;
    bool refine = false;
    /// Refine clips the forecast to history [min - m, max + m] per channel,
    /// with m this fraction of the history range.
    double refine_margin = 0.1;
    std::size_t ma_window = 0;  // 0 = seasonal_period / 2, floor 2
    std::size_t ar_order = 0;   // 0 = seasonal_period / 4, capped at 8, floor 1
};

/// Deterministic rule-based policy: turn 1 runs data quality, basic statistics
/// and event summarization; turn 2 routes to a built-in model from the
/// analysis; turn 3 re-emits the stored forecast (optionally refined) inside
/// <think>/<answer> tags. Stateless: every decision derives from the prompt.
std::unique_ptr<Policy> make_scripted_policy(const ScriptedPolicyConfig& config = {});

}  // namespace tsagent::agent
