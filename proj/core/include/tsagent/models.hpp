#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsagent/matrix.hpp"
#include "tsagent/window.hpp"

namespace tsagent::models {

enum class ModelVariant { Naive, SeasonalNaive, Drift, MovingAverage, AutoRegressive, External };

/// Identifies a forecaster behind the unified prediction interface.
/// Built-ins run per channel; cross-channel experts live behind External.
struct ForecastModelId {
    ModelVariant variant = ModelVariant::Naive;
    std::size_t period = 0;        // SeasonalNaive
    std::size_t window = 0;        // MovingAverage
    std::size_t order = 0;         // AutoRegressive
    std::string endpoint;          // External: registered endpoint name

    void validate() const;
    std::string to_string() const;

    static ForecastModelId naive() { return {}; }
    static ForecastModelId seasonal_naive(std::size_t period);
    static ForecastModelId drift();
    static ForecastModelId moving_average(std::size_t window);
    static ForecastModelId autoregressive(std::size_t order);
    static ForecastModelId external(std::string endpoint);

    /// Parses {"model":"seasonal_naive","period":24} style argument documents.
    static ForecastModelId from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

struct Forecast {
    Matrix values;  // horizon x C_target, finite
    ForecastModelId model_id;
    /// Optional per-channel fit diagnostics (e.g. AR coefficients).
    std::optional<nlohmann::ordered_json> fit_notes;
};

struct ArFit {
    double intercept = 0.0;
    std::vector<double> coefficients;  // coefficient j multiplies x[t-1-j]
    bool ridge_used = false;
};

/// Least-squares AR(p) fit with intercept, minimizing one-step error over the
/// history. Constant histories collapse to an intercept-only model;
/// rank-deficient normal equations fall back to ridge with lambda = 1e-8.
ArFit fit_ar(const std::vector<double>& history, std::size_t order);

class ExternalModelRegistry;

/// Unified prediction interface over the built-in variants. External model ids
/// require a registry. Forecasts cover the window's target channels.
Forecast predict_time_series(const ForecastModelId& model, const Window& window,
                             std::size_t horizon,
                             const ExternalModelRegistry* externals = nullptr);

/// One-step-ahead in-sample fitted values for residual diagnostics.
/// fitted[i] predicts history[first_index + i] from values before it.
struct InSampleFit {
    std::size_t first_index = 0;
    std::vector<double> fitted;
};
InSampleFit one_step_fits(const ForecastModelId& model, const std::vector<double>& history);

}  // namespace tsagent::models
