#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tsagent/models.hpp"
#include "tsagent/window.hpp"

namespace tsagent::toolkit {

struct ToolkitConfig {
    double constant_tolerance = 1e-12;      // is_constant when max-min < tol
    double abnormal_z_threshold = 3.0;      // |z| beyond this counts as abnormal
    double abnormal_fraction_threshold = 0.05;
    std::size_t changepoint_window = 12;    // points on each side of the scan index
    double changepoint_threshold = 3.0;     // |mean shift| / pooled std
    std::size_t stable_window = 12;         // rolling-variance window
    double stable_percentile = 25.0;        // rolling variances below this percentile
    std::size_t extrema_neighborhood = 2;   // shared with the reward turning-point tolerance
    std::size_t event_segment_length = 0;   // 0 = seasonal_period / 4, floor 4
    double event_tau_stable = 0.25;
    double event_tau_trend = 0.5;
    std::size_t spectral_top_k = 3;
    std::size_t perm_entropy_order = 3;
    std::size_t perm_entropy_delay = 1;
};

enum class SegmentLabel { Rise, Decline, Stable, Oscillation };
std::string to_string(SegmentLabel label);

struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;  // inclusive
    SegmentLabel label = SegmentLabel::Stable;
    double slope = 0.0;
    double variance = 0.0;
};

/// Structured summary produced by one tool invocation. The JSON form is the
/// exact document injected into prompts and stored in Analysis History, with
/// fixed field order. Numeric fields are finite or null (undefined).
struct ToolResult {
    std::string tool_name;
    std::string channel_scope = "all";
    nlohmann::ordered_json payload;
    int produced_at_turn = 0;

    nlohmann::ordered_json to_json() const;
    static ToolResult from_json(const nlohmann::ordered_json& j);
};

ToolResult extract_data_quality(const Window& window, const ToolkitConfig& cfg = {});
ToolResult extract_basic_statistics(const Window& window, const ToolkitConfig& cfg = {});
ToolResult extract_within_channel_dynamics(const Window& window, const std::string& channel,
                                           const ToolkitConfig& cfg = {});
ToolResult summarize_events(const Window& window, const std::string& channel,
                            const ToolkitConfig& cfg = {});
ToolResult diagnose_residuals(const Window& window, const models::ForecastModelId& baseline,
                              const ToolkitConfig& cfg = {});

/// Two-sided sliding-window mean-shift scan: at each index the means of the
/// `window` points before and after are compared; changepoints are local
/// maxima of |dmean| / pooled std above `threshold`, thinned so that kept
/// points are at least `window` apart (higher scores win).
std::vector<std::size_t> detect_changepoints(const std::vector<double>& xs, std::size_t window,
                                             double threshold);
/// The raw scan scores (0 where the two-sided window does not fit).
std::vector<double> changepoint_scores(const std::vector<double>& xs, std::size_t window);

struct ExtremumPoint {
    std::size_t index = 0;
    bool is_maximum = false;
};
/// Strict local extrema over a full +-neighborhood; boundary indices without a
/// complete neighborhood are never extrema, so monotone series have none.
std::vector<ExtremumPoint> local_extrema(const std::vector<double>& xs,
                                         std::size_t neighborhood);

enum class ToolStage { FeatureExtraction, Prediction };

struct ToolSpec {
    std::string name;
    ToolStage stage = ToolStage::FeatureExtraction;
    std::string description;
    nlohmann::ordered_json argument_schema;

    nlohmann::ordered_json to_json() const;
    static ToolSpec from_json(const nlohmann::ordered_json& j);
};

/// The registered action surface: five diagnostic tools (turn-1 eligible) and
/// the prediction tool (turn-2 eligible), in stable order.
const std::vector<ToolSpec>& tool_registry();
bool is_diagnostic_tool(const std::string& name);

/// Dispatches one diagnostic tool by registry name. `arguments` may carry
/// {"channel": ...} for channel-scoped tools (default: first target channel)
/// and {"model": ...} for diagnose_residuals (default: naive baseline).
ToolResult run_tool(const std::string& name, const nlohmann::json& arguments,
                    const Window& window, const ToolkitConfig& cfg = {});

}  // namespace tsagent::toolkit
