#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "tsagent/matrix.hpp"

namespace tsagent::reward {

struct RewardWeights {
    double w_acc = 0.6;
    double w_trend = 0.1;
    double w_seas = 0.1;
    double w_turn = 0.2;
    double p_format = 1.0;           // >= 1 makes format validity dominate
    double p_length_answer = 0.5;    // per missing/extra step, normalized by horizon
    double p_length_response = 0.1;  // per token over budget, normalized by budget
    long token_budget = 4096;

    void validate() const;  // component weights on the simplex, penalties nonnegative
};

/// Reward-term ablation switches, applied after weight validation.
struct RewardSwitches {
    bool pred_error = true;      // accuracy term
    bool trend_seasonal = true;  // trend + seasonal consistency terms
    bool turning = true;         // structural alignment term
    bool length_penalty = true;  // answer- and response-length penalties
};

struct RewardBreakdown {
    double accuracy = 0.0;
    double trend = 0.0;
    double seasonal = 0.0;
    double turning = 0.0;
    bool format_ok = true;
    long answer_length_delta = 0;
    std::optional<long> response_tokens;
    double total = 0.0;

    nlohmann::ordered_json to_json() const;
};

/// Scale-free error: MSE / (truth variance + 1e-8), variance averaged over the
/// horizon per channel.
double nmse(const Matrix& forecast, const Matrix& truth);

/// 1 / (1 + ln(1 + nMSE)): 1.0 for a perfect forecast, strictly decreasing in
/// MSE, exactly 0.5 at nMSE = e - 1.
double accuracy_reward(const Matrix& forecast, const Matrix& truth);

struct Decomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> residual;
};

/// Additive moving-average decomposition. Trend is a centered mean of width
/// `period` with shrinking edge windows; seasonal holds de-meaned period-
/// indexed means of the detrended series (all zero when the series is shorter
/// than two periods). trend + seasonal + residual reconstructs exactly.
Decomposition decompose(const std::vector<double>& series, std::size_t period);

enum class Component { Trend, Seasonal };

/// (rho + 1) / 2 for the Pearson correlation between the selected components.
/// When either component is constant: 1.0 if both are, 0.0 otherwise.
/// Multichannel inputs average the per-channel scores.
double component_consistency(const Matrix& forecast, const Matrix& truth, Component which,
                             std::size_t period);

/// F1 of greedily matched local extrema of equal polarity within +-tolerance
/// steps (strict extrema over a +-neighborhood, shared with the toolkit).
/// Extrema-free pairs score 1.0. Channels pool their extremum counts.
double turning_point_score(const Matrix& forecast, const Matrix& truth, std::size_t tolerance = 2,
                           std::size_t neighborhood = 2);

struct EpisodeRewardInputs {
    const Matrix* forecast = nullptr;  // null when no forecast was parsed
    const Matrix* truth = nullptr;     // required
    bool format_valid = true;
    long answer_length_delta = 0;
    std::optional<long> response_tokens;
    std::size_t period = 24;
    std::size_t horizon = 0;
    std::size_t turning_tolerance = 2;
    std::size_t extrema_neighborhood = 2;
};

/// The single end-of-episode reward: weighted component sum minus format and
/// length penalties, clamped to [-1, 1]. Length-inconsistent forecasts are
/// scored over the overlapping prefix and penalized per missing/extra step.
RewardBreakdown total_reward(const EpisodeRewardInputs& in, const RewardWeights& weights,
                             const RewardSwitches& switches = {});

}  // namespace tsagent::reward
