#include "tsagent/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tsagent/errors.hpp"
#include "tsagent/stats.hpp"
#include "tsagent/toolkit.hpp"

namespace tsagent::reward {

namespace {

constexpr double kEps = 1e-8;
constexpr double kConstTol = 1e-12;

void require_same_shape(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(who) + ": shape mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
}

}  // namespace

void RewardWeights::validate() const {
    if (w_acc < 0 || w_trend < 0 || w_seas < 0 || w_turn < 0)
        throw ConfigError("reward: component weights must be nonnegative");
    const double sum = w_acc + w_trend + w_seas + w_turn;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw ConfigError("reward: component weights sum to " + std::to_string(sum) +
                          ", expected 1");
    if (p_format < 0 || p_length_answer < 0 || p_length_response < 0)
        throw ConfigError("reward: penalties must be nonnegative");
    if (token_budget <= 0) throw ConfigError("reward: token budget must be positive");
}

nlohmann::ordered_json RewardBreakdown::to_json() const {
    nlohmann::ordered_json j;
    j["accuracy"] = accuracy;
    j["trend"] = trend;
    j["seasonal"] = seasonal;
    j["turning"] = turning;
    j["format_ok"] = format_ok;
    j["answer_length_delta"] = answer_length_delta;
    if (response_tokens)
        j["response_tokens"] = *response_tokens;
    else
        j["response_tokens"] = nullptr;
    j["total"] = total;
    return j;
}

double nmse(const Matrix& forecast, const Matrix& truth) {
    require_same_shape(forecast, truth, "nmse");
    if (truth.rows() == 0) throw std::invalid_argument("nmse: empty inputs");
    double se = 0.0;
    for (std::size_t r = 0; r < truth.rows(); ++r)
        for (std::size_t c = 0; c < truth.cols(); ++c) {
            const double d = forecast(r, c) - truth(r, c);
            se += d * d;
        }
    const double mse = se / static_cast<double>(truth.rows() * truth.cols());

    double var_sum = 0.0;
    for (std::size_t c = 0; c < truth.cols(); ++c)
        var_sum += stats::population_variance(truth.column(c));
    const double var = var_sum / static_cast<double>(truth.cols());
    return mse / (var + kEps);
}

double accuracy_reward(const Matrix& forecast, const Matrix& truth) {
    return 1.0 / (1.0 + std::log1p(nmse(forecast, truth)));
}

Decomposition decompose(const std::vector<double>& series, std::size_t period) {
    if (period < 2) throw std::invalid_argument("decompose: period must be >= 2");
    const std::size_t n = series.size();
    Decomposition d;
    d.trend.resize(n);
    d.seasonal.assign(n, 0.0);
    d.residual.resize(n);

    // Centered mean of width `period` wherever the full window fits; edges
    // extend the nearest full-window value flat. Shrinking edge windows would
    // leak period-scale oscillation into the trend and blow up the residual.
    const std::size_t half_lo = (period - 1) / 2;
    const std::size_t half_hi = period / 2;
    if (n >= period) {
        const std::size_t first = half_lo;
        const std::size_t last = n - 1 - half_hi;
        for (std::size_t i = first; i <= last; ++i) {
            double acc = 0.0;
            for (std::size_t j = i - half_lo; j <= i + half_hi; ++j) acc += series[j];
            d.trend[i] = acc / static_cast<double>(period);
        }
        for (std::size_t i = 0; i < first; ++i) d.trend[i] = d.trend[first];
        for (std::size_t i = last + 1; i < n; ++i) d.trend[i] = d.trend[last];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = i >= half_lo ? i - half_lo : 0;
            const std::size_t b = std::min(n - 1, i + half_hi);
            double acc = 0.0;
            for (std::size_t j = a; j <= b; ++j) acc += series[j];
            d.trend[i] = acc / static_cast<double>(b - a + 1);
        }
    }

    if (n >= 2 * period) {
        std::vector<double> means(period, 0.0);
        std::vector<std::size_t> counts(period, 0);
        for (std::size_t i = 0; i < n; ++i) {
            means[i % period] += series[i] - d.trend[i];
            ++counts[i % period];
        }
        double grand = 0.0;
        for (std::size_t k = 0; k < period; ++k) {
            means[k] /= static_cast<double>(counts[k]);
            grand += means[k];
        }
        grand /= static_cast<double>(period);
        for (std::size_t k = 0; k < period; ++k) means[k] -= grand;
        for (std::size_t i = 0; i < n; ++i) d.seasonal[i] = means[i % period];
    }

    for (std::size_t i = 0; i < n; ++i) d.residual[i] = series[i] - d.trend[i] - d.seasonal[i];
    return d;
}

double component_consistency(const Matrix& forecast, const Matrix& truth, Component which,
                             std::size_t period) {
    require_same_shape(forecast, truth, "component_consistency");
    if (truth.rows() == 0) return 0.0;

    double acc = 0.0;
    for (std::size_t c = 0; c < truth.cols(); ++c) {
        const auto df = decompose(forecast.column(c), period);
        const auto dt = decompose(truth.column(c), period);
        const auto& xf = which == Component::Trend ? df.trend : df.seasonal;
        const auto& xt = which == Component::Trend ? dt.trend : dt.seasonal;

        const bool f_const = stats::population_std(xf) < kConstTol;
        const bool t_const = stats::population_std(xt) < kConstTol;
        double rho;
        if (f_const || t_const) {
            rho = (f_const && t_const) ? 1.0 : 0.0;
        } else {
            rho = stats::pearson(xf, xt).value_or(0.0);
        }
        acc += (rho + 1.0) / 2.0;
    }
    return acc / static_cast<double>(truth.cols());
}

double turning_point_score(const Matrix& forecast, const Matrix& truth, std::size_t tolerance,
                           std::size_t neighborhood) {
    require_same_shape(forecast, truth, "turning_point_score");

    std::size_t matched = 0, total_forecast = 0, total_truth = 0;
    for (std::size_t c = 0; c < truth.cols(); ++c) {
        const auto ef = toolkit::local_extrema(forecast.column(c), neighborhood);
        const auto et = toolkit::local_extrema(truth.column(c), neighborhood);
        total_forecast += ef.size();
        total_truth += et.size();

        // Greedy left-to-right one-to-one matching per polarity: each forecast
        // extremum takes the earliest unused truth extremum within tolerance.
        for (const bool polarity : {true, false}) {
            std::vector<std::size_t> truth_idx;
            for (const auto& e : et)
                if (e.is_maximum == polarity) truth_idx.push_back(e.index);
            std::size_t next = 0;
            for (const auto& e : ef) {
                if (e.is_maximum != polarity) continue;
                while (next < truth_idx.size() &&
                       truth_idx[next] + tolerance < e.index)
                    ++next;
                if (next < truth_idx.size() &&
                    (truth_idx[next] >= e.index ? truth_idx[next] - e.index
                                                : e.index - truth_idx[next]) <= tolerance) {
                    ++matched;
                    ++next;
                }
            }
        }
    }

    if (total_forecast + total_truth == 0) return 1.0;
    return 2.0 * static_cast<double>(matched) /
           static_cast<double>(total_forecast + total_truth);
}

RewardBreakdown total_reward(const EpisodeRewardInputs& in, const RewardWeights& weights,
                             const RewardSwitches& switches) {
    weights.validate();
    if (!in.truth) throw std::invalid_argument("total_reward: ground truth required");
    if (in.horizon == 0) throw std::invalid_argument("total_reward: horizon must be positive");

    RewardBreakdown out;
    out.format_ok = in.format_valid;
    out.answer_length_delta = in.answer_length_delta;
    out.response_tokens = in.response_tokens;

    if (in.forecast && in.forecast->rows() > 0) {
        // Length-inconsistent answers score over the overlapping prefix; the
        // missing or extra steps are charged by the length penalty instead.
        const std::size_t rows = std::min(in.forecast->rows(), in.truth->rows());
        const Matrix f = in.forecast->slice_rows(0, rows);
        const Matrix t = in.truth->slice_rows(0, rows);
        out.accuracy = accuracy_reward(f, t);
        out.trend = component_consistency(f, t, Component::Trend, in.period);
        out.seasonal = component_consistency(f, t, Component::Seasonal, in.period);
        out.turning = turning_point_score(f, t, in.turning_tolerance, in.extrema_neighborhood);
    }

    double total = 0.0;
    if (switches.pred_error) total += weights.w_acc * out.accuracy;
    if (switches.trend_seasonal)
        total += weights.w_trend * out.trend + weights.w_seas * out.seasonal;
    if (switches.turning) total += weights.w_turn * out.turning;

    if (!in.format_valid) total -= weights.p_format;
    if (switches.length_penalty) {
        total -= weights.p_length_answer * std::fabs(static_cast<double>(in.answer_length_delta)) /
                 static_cast<double>(in.horizon);
        if (in.response_tokens && *in.response_tokens > weights.token_budget)
            total -= weights.p_length_response *
                     static_cast<double>(*in.response_tokens - weights.token_budget) /
                     static_cast<double>(weights.token_budget);
    }

    out.total = std::clamp(total, -1.0, 1.0);
    return out;
}

}  // namespace tsagent::reward
