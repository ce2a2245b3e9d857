#include "tsagent/models.hpp"

#include <cmath>
#include <stdexcept>

#include "tsagent/errors.hpp"
#include "tsagent/external_model.hpp"
#include "tsagent/stats.hpp"

namespace tsagent::models {

namespace {

constexpr double kRidgeLambda = 1e-8;
constexpr double kConstTol = 1e-12;

/// Gaussian elimination with partial pivoting. Returns false on a ~zero pivot.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * out[c];
        out[i] = acc / a[i][i];
    }
    return true;
}

std::string variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::Naive: return "naive";
        case ModelVariant::SeasonalNaive: return "seasonal_naive";
        case ModelVariant::Drift: return "drift";
        case ModelVariant::MovingAverage: return "moving_average";
        case ModelVariant::AutoRegressive: return "ar";
        case ModelVariant::External: return "external";
    }
    return "?";
}

std::vector<double> forecast_channel(const ForecastModelId& model,
                                     const std::vector<double>& history, std::size_t horizon,
                                     nlohmann::ordered_json* note) {
    const std::size_t n = history.size();
    std::vector<double> out(horizon);
    switch (model.variant) {
        case ModelVariant::Naive: {
            if (n == 0) throw DataError("naive: empty history");
            std::fill(out.begin(), out.end(), history.back());
            return out;
        }
        case ModelVariant::SeasonalNaive: {
            if (n < model.period)
                throw DataError("seasonal_naive: lookback " + std::to_string(n) +
                                " below period " + std::to_string(model.period));
            for (std::size_t h = 0; h < horizon; ++h)
                out[h] = history[n - model.period + h % model.period];
            return out;
        }
        case ModelVariant::Drift: {
            if (n < 2) throw DataError("drift: needs at least 2 points");
            const double slope = (history.back() - history.front()) / static_cast<double>(n - 1);
            for (std::size_t h = 0; h < horizon; ++h)
                out[h] = history.back() + static_cast<double>(h + 1) * slope;
            return out;
        }
        case ModelVariant::MovingAverage: {
            if (n < model.window)
                throw DataError("moving_average: lookback below window " +
                                std::to_string(model.window));
            double acc = 0.0;
            for (std::size_t i = n - model.window; i < n; ++i) acc += history[i];
            std::fill(out.begin(), out.end(), acc / static_cast<double>(model.window));
            return out;
        }
        case ModelVariant::AutoRegressive: {
            if (n < 3 * model.order)
                throw DataError("ar: lookback " + std::to_string(n) + " below 3*order " +
                                std::to_string(3 * model.order));
            const ArFit fit = fit_ar(history, model.order);
            std::vector<double> extended = history;
            for (std::size_t h = 0; h < horizon; ++h) {
                double v = fit.intercept;
                for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
                    v += fit.coefficients[j] * extended[extended.size() - 1 - j];
                extended.push_back(v);
                out[h] = v;
            }
            if (note) {
                (*note)["intercept"] = fit.intercept;
                (*note)["coefficients"] = fit.coefficients;
                (*note)["ridge_used"] = fit.ridge_used;
            }
            return out;
        }
        case ModelVariant::External:
            throw std::logic_error("external models are dispatched before per-channel forecasting");
    }
    throw std::logic_error("unreachable model variant");
}

}  // namespace

void ForecastModelId::validate() const {
    switch (variant) {
        case ModelVariant::SeasonalNaive:
            if (period < 1) throw ConfigError("seasonal_naive: period must be >= 1");
            break;
        case ModelVariant::MovingAverage:
            if (window < 1) throw ConfigError("moving_average: window must be >= 1");
            break;
        case ModelVariant::AutoRegressive:
            if (order < 1) throw ConfigError("ar: order must be >= 1");
            break;
        case ModelVariant::External:
            if (endpoint.empty()) throw ConfigError("external: endpoint name required");
            break;
        default:
            break;
    }
}

std::string ForecastModelId::to_string() const {
    switch (variant) {
        case ModelVariant::SeasonalNaive:
            return "seasonal_naive(period=" + std::to_string(period) + ")";
        case ModelVariant::MovingAverage:
            return "moving_average(window=" + std::to_string(window) + ")";
        case ModelVariant::AutoRegressive:
            return "ar(order=" + std::to_string(order) + ")";
        case ModelVariant::External:
            return "external(" + endpoint + ")";
        default:
            return variant_name(variant);
    }
}

ForecastModelId ForecastModelId::seasonal_naive(std::size_t period) {
    ForecastModelId m;
    m.variant = ModelVariant::SeasonalNaive;
    m.period = period;
    return m;
}
ForecastModelId ForecastModelId::drift() {
    ForecastModelId m;
    m.variant = ModelVariant::Drift;
    return m;
}
ForecastModelId ForecastModelId::moving_average(std::size_t window) {
    ForecastModelId m;
    m.variant = ModelVariant::MovingAverage;
    m.window = window;
    return m;
}
ForecastModelId ForecastModelId::autoregressive(std::size_t order) {
    ForecastModelId m;
    m.variant = ModelVariant::AutoRegressive;
    m.order = order;
    return m;
}
ForecastModelId ForecastModelId::external(std::string endpoint) {
    ForecastModelId m;
    m.variant = ModelVariant::External;
    m.endpoint = std::move(endpoint);
    return m;
}

ForecastModelId ForecastModelId::from_json(const nlohmann::json& j) {
    if (!j.contains("model") || !j["model"].is_string())
        throw ConfigError("model id: missing 'model' field");
    const std::string name = j["model"].get<std::string>();
    ForecastModelId m;
    if (name == "naive") {
        m.variant = ModelVariant::Naive;
    } else if (name == "seasonal_naive") {
        m.variant = ModelVariant::SeasonalNaive;
        m.period = j.value("period", 0u);
    } else if (name == "drift") {
        m.variant = ModelVariant::Drift;
    } else if (name == "moving_average") {
        m.variant = ModelVariant::MovingAverage;
        m.window = j.value("window", 0u);
    } else if (name == "ar") {
        m.variant = ModelVariant::AutoRegressive;
        m.order = j.value("order", 0u);
    } else if (name == "external") {
        m.variant = ModelVariant::External;
        m.endpoint = j.value("endpoint", std::string());
    } else {
        throw ConfigError("model id: unknown model '" + name + "'");
    }
    m.validate();
    return m;
}

nlohmann::ordered_json ForecastModelId::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = variant_name(variant);
    switch (variant) {
        case ModelVariant::SeasonalNaive: j["period"] = period; break;
        case ModelVariant::MovingAverage: j["window"] = window; break;
        case ModelVariant::AutoRegressive: j["order"] = order; break;
        case ModelVariant::External: j["endpoint"] = endpoint; break;
        default: break;
    }
    return j;
}

ArFit fit_ar(const std::vector<double>& history, std::size_t order) {
    if (order < 1) throw ConfigError("fit_ar: order must be >= 1");
    const std::size_t n = history.size();
    if (n < 3 * order)
        throw DataError("fit_ar: history length " + std::to_string(n) + " below 3*order");

    ArFit fit;
    fit.coefficients.assign(order, 0.0);

    const double lo = stats::min_value(history), hi = stats::max_value(history);
    if (hi - lo < kConstTol) {
        fit.intercept = history.back();
        return fit;
    }

    // Normal equations for [1, x_{t-1}, ..., x_{t-p}] -> x_t.
    const std::size_t dim = order + 1;
    std::vector<std::vector<double>> ata(dim, std::vector<double>(dim, 0.0));
    std::vector<double> atb(dim, 0.0);
    for (std::size_t t = order; t < n; ++t) {
        std::vector<double> row(dim);
        row[0] = 1.0;
        for (std::size_t j = 0; j < order; ++j) row[j + 1] = history[t - 1 - j];
        for (std::size_t a = 0; a < dim; ++a) {
            atb[a] += row[a] * history[t];
            for (std::size_t b = 0; b < dim; ++b) ata[a][b] += row[a] * row[b];
        }
    }

    std::vector<double> beta;
    if (!solve_linear(ata, atb, beta)) {
        for (std::size_t i = 0; i < dim; ++i) ata[i][i] += kRidgeLambda;
        if (!solve_linear(ata, atb, beta))
            throw DataError("fit_ar: normal equations unsolvable even with ridge");
        fit.ridge_used = true;
    }
    fit.intercept = beta[0];
    for (std::size_t j = 0; j < order; ++j) fit.coefficients[j] = beta[j + 1];
    return fit;
}

Forecast predict_time_series(const ForecastModelId& model, const Window& window,
                             std::size_t horizon, const ExternalModelRegistry* externals) {
    model.validate();
    if (horizon == 0) throw ConfigError("predict: horizon must be positive");

    if (model.variant == ModelVariant::External) {
        if (!externals) throw ConfigError("predict: no external registry configured");
        return externals->call(model.endpoint, window, horizon);
    }

    const Matrix hist = window.target_history();
    Forecast fc;
    fc.model_id = model;
    fc.values = Matrix(horizon, hist.cols());
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    const auto names = window.target_names();
    for (std::size_t c = 0; c < hist.cols(); ++c) {
        const auto channel = stats::drop_missing(hist.column(c));
        if (channel.size() < 2)
            throw DataError("predict: channel '" + names[c] + "' has too few observations");
        nlohmann::ordered_json note = nlohmann::ordered_json::object();
        const auto col = forecast_channel(model, channel, horizon, &note);
        for (std::size_t h = 0; h < horizon; ++h) {
            if (!std::isfinite(col[h]))
                throw DataError("predict: non-finite forecast value for channel '" + names[c] + "'");
            fc.values(h, c) = col[h];
        }
        if (!note.empty()) notes[names[c]] = std::move(note);
    }
    if (!notes.empty()) fc.fit_notes = std::move(notes);
    return fc;
}

InSampleFit one_step_fits(const ForecastModelId& model, const std::vector<double>& history) {
    const std::size_t n = history.size();
    InSampleFit out;
    switch (model.variant) {
        case ModelVariant::Naive: {
            if (n < 2) throw DataError("one_step_fits: naive needs 2 points");
            out.first_index = 1;
            for (std::size_t t = 1; t < n; ++t) out.fitted.push_back(history[t - 1]);
            return out;
        }
        case ModelVariant::SeasonalNaive: {
            if (n < 2 * model.period)
                throw DataError("one_step_fits: seasonal_naive needs 2 full periods");
            out.first_index = model.period;
            for (std::size_t t = model.period; t < n; ++t)
                out.fitted.push_back(history[t - model.period]);
            return out;
        }
        case ModelVariant::Drift: {
            if (n < 3) throw DataError("one_step_fits: drift needs 3 points");
            out.first_index = 2;
            for (std::size_t t = 2; t < n; ++t) {
                const double slope =
                    (history[t - 1] - history[0]) / static_cast<double>(t - 1);
                out.fitted.push_back(history[t - 1] + slope);
            }
            return out;
        }
        case ModelVariant::MovingAverage: {
            if (n < model.window + 1)
                throw DataError("one_step_fits: moving_average needs window+1 points");
            out.first_index = model.window;
            for (std::size_t t = model.window; t < n; ++t) {
                double acc = 0.0;
                for (std::size_t i = t - model.window; i < t; ++i) acc += history[i];
                out.fitted.push_back(acc / static_cast<double>(model.window));
            }
            return out;
        }
        case ModelVariant::AutoRegressive: {
            const ArFit fit = fit_ar(history, model.order);
            out.first_index = model.order;
            for (std::size_t t = model.order; t < n; ++t) {
                double v = fit.intercept;
                for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
                    v += fit.coefficients[j] * history[t - 1 - j];
                out.fitted.push_back(v);
            }
            return out;
        }
        case ModelVariant::External:
            throw ConfigError("one_step_fits: residual diagnostics require a built-in baseline");
    }
    throw std::logic_error("unreachable model variant");
}

}  // namespace tsagent::models
