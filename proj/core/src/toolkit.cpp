#include "tsagent/toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tsagent/errors.hpp"
#include "tsagent/stats.hpp"

namespace tsagent::toolkit {

namespace {

using nlohmann::ordered_json;

/// Non-missing values of one channel plus a map back to original step indices.
struct CompactChannel {
    std::vector<double> values;
    std::vector<std::size_t> original_index;
};

CompactChannel compact(const std::vector<double>& raw) {
    CompactChannel c;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!is_missing(raw[i])) {
            c.values.push_back(raw[i]);
            c.original_index.push_back(i);
        }
    }
    return c;
}

void put_optional(ordered_json& j, const char* key, const std::optional<double>& v) {
    if (v && std::isfinite(*v))
        j[key] = *v;
    else
        j[key] = nullptr;
}

std::size_t resolve_channel(const Window& window, const std::string& channel) {
    for (std::size_t i = 0; i < window.channel_names.size(); ++i)
        if (window.channel_names[i] == channel) return i;
    throw DataError("toolkit: unknown channel '" + channel + "'");
}

std::size_t event_segment_length(const Window& window, const ToolkitConfig& cfg) {
    if (cfg.event_segment_length > 0) return cfg.event_segment_length;
    return std::max<std::size_t>(4, window.spec.seasonal_period / 4);
}

double signed_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

std::string to_string(SegmentLabel label) {
    switch (label) {
        case SegmentLabel::Rise: return "Rise";
        case SegmentLabel::Decline: return "Decline";
        case SegmentLabel::Stable: return "Stable";
        case SegmentLabel::Oscillation: return "Oscillation";
    }
    return "?";
}

ordered_json ToolResult::to_json() const {
    ordered_json j;
    j["tool_name"] = tool_name;
    j["channel_scope"] = channel_scope;
    j["produced_at_turn"] = produced_at_turn;
    j["payload"] = payload;
    return j;
}

ToolResult ToolResult::from_json(const nlohmann::ordered_json& j) {
    ToolResult r;
    r.tool_name = j.at("tool_name").get<std::string>();
    r.channel_scope = j.at("channel_scope").get<std::string>();
    r.produced_at_turn = j.at("produced_at_turn").get<int>();
    r.payload = j.at("payload");
    return r;
}

ToolResult extract_data_quality(const Window& window, const ToolkitConfig& cfg) {
    if (window.history.rows() == 0) throw DataError("extract_data_quality: empty history");
    const std::size_t length = window.history.rows();

    ordered_json channels = ordered_json::array();
    for (std::size_t c = 0; c < window.history.cols(); ++c) {
        const auto raw = window.history.column(c);
        const auto present = stats::drop_missing(raw);
        const std::size_t missing = length - present.size();

        ordered_json entry;
        entry["channel"] = window.channel_names[c];
        entry["missing_count"] = missing;
        entry["missing_fraction"] = static_cast<double>(missing) / static_cast<double>(length);

        if (present.empty()) {
            entry["is_constant"] = nullptr;
            entry["saturation_fraction"] = nullptr;
            entry["abnormal"] = nullptr;
            entry["abnormal_fraction"] = nullptr;
            channels.push_back(std::move(entry));
            continue;
        }

        const double lo = stats::min_value(present);
        const double hi = stats::max_value(present);
        entry["is_constant"] = (hi - lo) < cfg.constant_tolerance;

        // Longest run of consecutive, non-missing observations sitting at the
        // channel minimum or maximum, as a fraction of the window length.
        std::size_t best_run = 0, run = 0;
        double run_level = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const double v = raw[i];
            const bool at_edge =
                !is_missing(v) && (std::fabs(v - lo) < cfg.constant_tolerance ||
                                   std::fabs(v - hi) < cfg.constant_tolerance);
            if (at_edge && run > 0 && std::fabs(v - run_level) < cfg.constant_tolerance) {
                ++run;
            } else if (at_edge) {
                run = 1;
                run_level = v;
            } else {
                run = 0;
            }
            best_run = std::max(best_run, run);
        }
        entry["saturation_fraction"] =
            static_cast<double>(best_run) / static_cast<double>(length);

        const double mu = stats::mean(present);
        const double sd = stats::population_std(present);
        double abnormal_fraction = 0.0;
        if (sd >= cfg.constant_tolerance) {
            std::size_t beyond = 0;
            for (double v : present)
                if (std::fabs((v - mu) / sd) > cfg.abnormal_z_threshold) ++beyond;
            abnormal_fraction = static_cast<double>(beyond) / static_cast<double>(present.size());
        }
        entry["abnormal"] = abnormal_fraction > cfg.abnormal_fraction_threshold;
        entry["abnormal_fraction"] = abnormal_fraction;
        channels.push_back(std::move(entry));
    }

    ToolResult r;
    r.tool_name = "extract_data_quality";
    r.channel_scope = "all";
    r.payload["channels"] = std::move(channels);
    return r;
}

ToolResult extract_basic_statistics(const Window& window, const ToolkitConfig& cfg) {
    const std::size_t n_channels = window.history.cols();
    ordered_json channels = ordered_json::array();
    std::vector<std::vector<double>> raw_columns(n_channels);

    for (std::size_t c = 0; c < n_channels; ++c) {
        raw_columns[c] = window.history.column(c);
        const auto present = stats::drop_missing(raw_columns[c]);

        ordered_json entry;
        entry["channel"] = window.channel_names[c];
        if (present.size() < 2) {
            entry["undefined"] = true;
            channels.push_back(std::move(entry));
            continue;
        }
        entry["count"] = present.size();
        entry["mean"] = stats::mean(present);
        entry["median"] = stats::median(present);
        const double sd = stats::population_std(present);
        entry["std"] = sd;
        entry["mad"] = stats::mad(present);
        entry["min"] = stats::min_value(present);
        entry["max"] = stats::max_value(present);
        put_optional(entry, "skewness", stats::skewness(present));
        put_optional(entry, "excess_kurtosis", stats::excess_kurtosis(present));

        const double mu = stats::mean(present);
        if (sd < 1e-12 || std::fabs(mu) < 1e-12)
            entry["cv"] = nullptr;
        else
            entry["cv"] = sd / mu;

        // Spectral profile needs a gapless channel; a DFT over imputed data
        // would fake frequency content.
        if (present.size() == raw_columns[c].size() && present.size() >= 4) {
            auto peaks = stats::dft_top_bins(present, cfg.spectral_top_k);
            ordered_json spec = ordered_json::array();
            for (const auto& p : peaks) {
                ordered_json sp;
                sp["period_steps"] = p.period_steps;
                sp["bin"] = p.bin;
                sp["magnitude"] = p.magnitude;
                spec.push_back(std::move(sp));
            }
            entry["spectral"] = std::move(spec);
        } else {
            entry["spectral"] = nullptr;
        }
        channels.push_back(std::move(entry));
    }

    // Pairwise-complete Pearson correlations.
    ordered_json corr;
    corr["channels"] = window.channel_names;
    ordered_json matrix = ordered_json::array();
    for (std::size_t a = 0; a < n_channels; ++a) {
        ordered_json row = ordered_json::array();
        for (std::size_t b = 0; b < n_channels; ++b) {
            std::vector<double> xa, xb;
            for (std::size_t t = 0; t < raw_columns[a].size(); ++t) {
                if (!is_missing(raw_columns[a][t]) && !is_missing(raw_columns[b][t])) {
                    xa.push_back(raw_columns[a][t]);
                    xb.push_back(raw_columns[b][t]);
                }
            }
            if (a == b && xa.size() >= 2 &&
                stats::population_std(xa) >= 1e-12) {
                row.push_back(1.0);
                continue;
            }
            const auto rho = stats::pearson(xa, xb);
            if (rho)
                row.push_back(*rho);
            else
                row.push_back(nullptr);
        }
        matrix.push_back(std::move(row));
    }
    corr["matrix"] = std::move(matrix);

    ToolResult r;
    r.tool_name = "extract_basic_statistics";
    r.channel_scope = "all";
    r.payload["channels"] = std::move(channels);
    r.payload["correlation"] = std::move(corr);
    return r;
}

std::vector<double> changepoint_scores(const std::vector<double>& xs, std::size_t window) {
    const std::size_t n = xs.size();
    std::vector<double> scores(n, 0.0);
    if (window == 0 || n < 2 * window) return scores;
    for (std::size_t i = window; i + window <= n; ++i) {
        std::vector<double> left(xs.begin() + static_cast<std::ptrdiff_t>(i - window),
                                 xs.begin() + static_cast<std::ptrdiff_t>(i));
        std::vector<double> right(xs.begin() + static_cast<std::ptrdiff_t>(i),
                                  xs.begin() + static_cast<std::ptrdiff_t>(i + window));
        const double dm = std::fabs(stats::mean(right) - stats::mean(left));
        const double pooled = std::sqrt(
            0.5 * (stats::population_variance(left) + stats::population_variance(right)));
        scores[i] = dm / std::max(pooled, 1e-9);
    }
    return scores;
}

std::vector<std::size_t> detect_changepoints(const std::vector<double>& xs, std::size_t window,
                                             double threshold) {
    const auto scores = changepoint_scores(xs, window);
    // Strict local maxima with both neighbors inside the scored range, so a
    // uniform trend (constant score plateau) never fires at the scan edge.
    std::vector<std::size_t> candidates;
    const std::size_t first = window + 1;
    const std::size_t last = xs.size() >= window + 1 ? xs.size() - window - 1 : 0;
    for (std::size_t i = first; i + 1 <= last; ++i) {
        if (scores[i] <= threshold) continue;
        if (scores[i - 1] < scores[i] && scores[i] >= scores[i + 1]) candidates.push_back(i);
    }
    // Thin candidates closer than the scan window; keep the stronger score.
    std::vector<std::size_t> by_score = candidates;
    std::stable_sort(by_score.begin(), by_score.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    std::vector<std::size_t> kept;
    for (std::size_t idx : by_score) {
        bool clashes = false;
        for (std::size_t k : kept)
            if (idx > k ? idx - k < window : k - idx < window) clashes = true;
        if (!clashes) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<ExtremumPoint> local_extrema(const std::vector<double>& xs,
                                         std::size_t neighborhood) {
    std::vector<ExtremumPoint> out;
    const std::size_t n = xs.size();
    if (neighborhood == 0 || n < 2 * neighborhood + 1) return out;
    for (std::size_t i = neighborhood; i + neighborhood < n; ++i) {
        bool is_max = true, is_min = true;
        for (std::size_t j = i - neighborhood; j <= i + neighborhood; ++j) {
            if (j == i) continue;
            if (xs[j] >= xs[i]) is_max = false;
            if (xs[j] <= xs[i]) is_min = false;
        }
        if (is_max)
            out.push_back({i, true});
        else if (is_min)
            out.push_back({i, false});
    }
    return out;
}

ToolResult extract_within_channel_dynamics(const Window& window, const std::string& channel,
                                           const ToolkitConfig& cfg) {
    const std::size_t col = resolve_channel(window, channel);
    const CompactChannel ch = compact(window.history.column(col));
    if (ch.values.size() < 2 * cfg.changepoint_window)
        throw DataError("extract_within_channel_dynamics: channel '" + channel + "' has " +
                        std::to_string(ch.values.size()) + " points, needs at least " +
                        std::to_string(2 * cfg.changepoint_window));

    ordered_json payload;
    payload["channel"] = channel;
    payload["observations"] = ch.values.size();

    const auto cps =
        detect_changepoints(ch.values, cfg.changepoint_window, cfg.changepoint_threshold);
    ordered_json cps_json = ordered_json::array();
    for (std::size_t cp : cps) cps_json.push_back(ch.original_index[cp]);
    payload["changepoints"] = std::move(cps_json);

    // OLS slopes over the spans between consecutive changepoints.
    ordered_json slopes = ordered_json::array();
    std::vector<std::size_t> bounds{0};
    bounds.insert(bounds.end(), cps.begin(), cps.end());
    bounds.push_back(ch.values.size());
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const std::size_t a = bounds[s], b = bounds[s + 1];
        if (b - a < 2) continue;
        std::vector<double> seg(ch.values.begin() + static_cast<std::ptrdiff_t>(a),
                                ch.values.begin() + static_cast<std::ptrdiff_t>(b));
        ordered_json sj;
        sj["start"] = ch.original_index[a];
        sj["end"] = ch.original_index[b - 1];
        sj["slope"] = signed_zero(stats::ols_slope(seg));
        slopes.push_back(std::move(sj));
    }
    payload["segment_slopes"] = std::move(slopes);

    // Maximal runs whose rolling variance sits below the configured percentile.
    ordered_json stable = ordered_json::array();
    const std::size_t w = cfg.stable_window;
    if (ch.values.size() >= w && w >= 2) {
        std::vector<double> rolling;
        for (std::size_t i = 0; i + w <= ch.values.size(); ++i) {
            std::vector<double> win(ch.values.begin() + static_cast<std::ptrdiff_t>(i),
                                    ch.values.begin() + static_cast<std::ptrdiff_t>(i + w));
            rolling.push_back(stats::population_variance(win));
        }
        const double cut = stats::percentile(rolling, cfg.stable_percentile);
        std::size_t run_start = 0;
        bool in_run = false;
        for (std::size_t i = 0; i <= rolling.size(); ++i) {
            const bool ok = i < rolling.size() && rolling[i] < cut;
            if (ok && !in_run) {
                run_start = i;
                in_run = true;
            } else if (!ok && in_run) {
                ordered_json seg;
                seg["start"] = ch.original_index[run_start];
                seg["end"] = ch.original_index[i - 1 + w - 1];
                stable.push_back(std::move(seg));
                in_run = false;
            }
        }
    }
    payload["stable_segments"] = std::move(stable);

    ordered_json extrema = ordered_json::array();
    for (const auto& e : local_extrema(ch.values, cfg.extrema_neighborhood)) {
        ordered_json ej;
        ej["index"] = ch.original_index[e.index];
        ej["kind"] = e.is_maximum ? "max" : "min";
        extrema.push_back(std::move(ej));
    }
    payload["local_extrema"] = std::move(extrema);

    payload["permutation_entropy"] =
        stats::permutation_entropy(ch.values, cfg.perm_entropy_order, cfg.perm_entropy_delay);

    ToolResult r;
    r.tool_name = "extract_within_channel_dynamics";
    r.channel_scope = channel;
    r.payload = std::move(payload);
    return r;
}

ToolResult summarize_events(const Window& window, const std::string& channel,
                            const ToolkitConfig& cfg) {
    const std::size_t col = resolve_channel(window, channel);
    const CompactChannel ch = compact(window.history.column(col));
    const std::size_t g = event_segment_length(window, cfg);
    if (ch.values.size() < g)
        throw DataError("summarize_events: channel shorter than segment length " +
                        std::to_string(g));

    const double channel_std = stats::population_std(ch.values);
    const bool flat_channel = channel_std < cfg.constant_tolerance;

    std::vector<Segment> segments;
    for (std::size_t start = 0; start < ch.values.size(); start += g) {
        const std::size_t end = std::min(start + g, ch.values.size());
        std::vector<double> seg(ch.values.begin() + static_cast<std::ptrdiff_t>(start),
                                ch.values.begin() + static_cast<std::ptrdiff_t>(end));
        Segment s;
        s.start = ch.original_index[start];
        s.end = ch.original_index[end - 1];
        s.slope = seg.size() >= 2 ? stats::ols_slope(seg) : 0.0;
        s.variance = stats::population_variance(seg);
        const double seg_std = std::sqrt(std::max(s.variance, 0.0));
        if (flat_channel || seg_std < cfg.event_tau_stable * channel_std) {
            s.label = SegmentLabel::Stable;
        } else if (std::fabs(s.slope) * static_cast<double>(g) >
                   cfg.event_tau_trend * channel_std) {
            s.label = s.slope > 0 ? SegmentLabel::Rise : SegmentLabel::Decline;
        } else {
            s.label = SegmentLabel::Oscillation;
        }
        segments.push_back(s);
    }

    const SegmentLabel order[] = {SegmentLabel::Rise, SegmentLabel::Decline, SegmentLabel::Stable,
                                  SegmentLabel::Oscillation};
    std::map<SegmentLabel, std::size_t> counts;
    for (const auto& s : segments) ++counts[s.label];

    ordered_json seg_json = ordered_json::array();
    for (const auto& s : segments) {
        ordered_json sj;
        sj["start"] = s.start;
        sj["end"] = s.end;
        sj["label"] = to_string(s.label);
        sj["slope"] = signed_zero(s.slope);
        sj["variance"] = s.variance;
        seg_json.push_back(std::move(sj));
    }

    ordered_json prevalence;
    SegmentLabel dominant = SegmentLabel::Rise;
    double best = -1.0;
    for (SegmentLabel l : order) {
        const double frac =
            static_cast<double>(counts[l]) / static_cast<double>(segments.size());
        prevalence[to_string(l)] = frac;
        if (frac > best) {  // ties keep the earlier label in fixed order
            best = frac;
            dominant = l;
        }
    }

    ToolResult r;
    r.tool_name = "summarize_events";
    r.channel_scope = channel;
    r.payload["channel"] = channel;
    r.payload["segment_length"] = g;
    r.payload["segments"] = std::move(seg_json);
    r.payload["prevalence"] = std::move(prevalence);
    r.payload["dominant_label"] = to_string(dominant);
    return r;
}

ToolResult diagnose_residuals(const Window& window, const models::ForecastModelId& baseline,
                              const ToolkitConfig& cfg) {
    baseline.validate();
    const Matrix hist = window.target_history();
    const auto names = window.target_names();

    ordered_json channels = ordered_json::array();
    for (std::size_t c = 0; c < hist.cols(); ++c) {
        const auto values = stats::drop_missing(hist.column(c));
        const auto fit = models::one_step_fits(baseline, values);

        std::vector<double> residuals;
        residuals.reserve(fit.fitted.size());
        for (std::size_t i = 0; i < fit.fitted.size(); ++i)
            residuals.push_back(values[fit.first_index + i] - fit.fitted[i]);

        ordered_json entry;
        entry["channel"] = names[c];
        entry["count"] = residuals.size();
        entry["mean"] = stats::mean(residuals);
        const double sd = stats::population_std(residuals);
        entry["std"] = sd;
        put_optional(entry, "skewness", stats::skewness(residuals));
        put_optional(entry, "excess_kurtosis", stats::excess_kurtosis(residuals));

        const std::size_t max_lag =
            std::min<std::size_t>(10, window.spec.lookback / 4);
        ordered_json acf = ordered_json::array();
        for (std::size_t lag = 1; lag <= max_lag; ++lag) {
            ordered_json a;
            a["lag"] = lag;
            a["value"] = stats::autocorrelation(residuals, lag);
            acf.push_back(std::move(a));
        }
        entry["autocorrelations"] = std::move(acf);
        entry["ljung_box_q"] = stats::ljung_box(residuals, max_lag);

        std::size_t extreme = 0;
        for (double rv : residuals)
            if (std::fabs(rv) > 3.0 * sd && sd > 0.0) ++extreme;
        entry["extreme_count"] = extreme;

        if (sd < 1e-300) {
            entry["tail_ratio"] = nullptr;
        } else {
            std::vector<double> abs_res(residuals.size());
            for (std::size_t i = 0; i < residuals.size(); ++i) abs_res[i] = std::fabs(residuals[i]);
            entry["tail_ratio"] = stats::percentile(abs_res, 99.0) / sd;
        }
        channels.push_back(std::move(entry));
    }

    ToolResult r;
    r.tool_name = "diagnose_residuals";
    r.channel_scope = "all";
    r.payload["model"] = baseline.to_json();
    r.payload["channels"] = std::move(channels);
    return r;
}

ordered_json ToolSpec::to_json() const {
    ordered_json j;
    j["name"] = name;
    j["stage"] = stage == ToolStage::FeatureExtraction ? "feature_extraction" : "prediction";
    j["description"] = description;
    j["arguments"] = argument_schema;
    return j;
}

ToolSpec ToolSpec::from_json(const nlohmann::ordered_json& j) {
    ToolSpec s;
    s.name = j.at("name").get<std::string>();
    s.stage = j.at("stage").get<std::string>() == "prediction" ? ToolStage::Prediction
                                                               : ToolStage::FeatureExtraction;
    s.description = j.at("description").get<std::string>();
    s.argument_schema = j.at("arguments");
    return s;
}

const std::vector<ToolSpec>& tool_registry() {
    static const std::vector<ToolSpec> registry = [] {
        std::vector<ToolSpec> r;
        auto add = [&r](const char* name, ToolStage stage, const char* desc,
                        ordered_json args) {
            ToolSpec s;
            s.name = name;
            s.stage = stage;
            s.description = desc;
            s.argument_schema = std::move(args);
            r.push_back(std::move(s));
        };
        add("extract_data_quality", ToolStage::FeatureExtraction,
            "Missing values, saturation, constant and abnormal channels.",
            ordered_json::object());
        add("extract_basic_statistics", ToolStage::FeatureExtraction,
            "Central tendency, dispersion, correlation structure, spectral peaks.",
            ordered_json::object());
        add("extract_within_channel_dynamics", ToolStage::FeatureExtraction,
            "Changepoints, segment slopes, stable segments, local extrema, entropy.",
            ordered_json{{"channel", "string, optional (default: first target channel)"}});
        add("summarize_events", ToolStage::FeatureExtraction,
            "Rise/Decline/Stable/Oscillation segment labels with prevalence.",
            ordered_json{{"channel", "string, optional (default: first target channel)"}});
        add("diagnose_residuals", ToolStage::FeatureExtraction,
            "One-step residual distribution and autocorrelation for a baseline model.",
            ordered_json{{"model", "string, optional (default: naive)"},
                         {"period", "integer, for seasonal_naive"},
                         {"window", "integer, for moving_average"},
                         {"order", "integer, for ar"}});
        add("predict_time_series", ToolStage::Prediction,
            "Invoke a forecasting model over the unified prediction interface.",
            ordered_json{{"model",
                          "string: naive | seasonal_naive | drift | moving_average | ar | external"},
                         {"period", "integer, for seasonal_naive"},
                         {"window", "integer, for moving_average"},
                         {"order", "integer, for ar"},
                         {"endpoint", "string, for external"}});
        return r;
    }();
    return registry;
}

bool is_diagnostic_tool(const std::string& name) {
    for (const auto& s : tool_registry())
        if (s.name == name) return s.stage == ToolStage::FeatureExtraction;
    return false;
}

ToolResult run_tool(const std::string& name, const nlohmann::json& arguments,
                    const Window& window, const ToolkitConfig& cfg) {
    const auto channel_arg = [&]() -> std::string {
        if (arguments.is_object() && arguments.contains("channel") &&
            arguments["channel"].is_string())
            return arguments["channel"].get<std::string>();
        return window.target_names().front();
    };

    if (name == "extract_data_quality") return extract_data_quality(window, cfg);
    if (name == "extract_basic_statistics") return extract_basic_statistics(window, cfg);
    if (name == "extract_within_channel_dynamics")
        return extract_within_channel_dynamics(window, channel_arg(), cfg);
    if (name == "summarize_events") return summarize_events(window, channel_arg(), cfg);
    if (name == "diagnose_residuals") {
        models::ForecastModelId baseline;  // naive default
        if (arguments.is_object() && arguments.contains("model"))
            baseline = models::ForecastModelId::from_json(arguments);
        return diagnose_residuals(window, baseline, cfg);
    }
    throw ConfigError("run_tool: unknown tool '" + name + "'");
}

}  // namespace tsagent::toolkit
