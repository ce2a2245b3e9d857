#include "tsagent/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

#include <json.hpp>

#include "tsagent/stats.hpp"

namespace tsagent::agent {

namespace {

/// Shortest round-trip decimal form, so the environment re-parses the exact double.
std::string format_full(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct ParsedPrompt {
    std::string stage;
    std::size_t horizon = 0;
    std::size_t seasonal_period = 24;
    std::vector<std::string> channels;
    std::vector<std::string> target_channels;
    std::vector<std::vector<double>> history;  // rows x channels
    std::vector<nlohmann::json> analysis;
    std::vector<nlohmann::json> predictions;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty() || !s.empty()) out.push_back(cur);
    return out;
}

ParsedPrompt parse_prompt(const std::string& text) {
    ParsedPrompt p;
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(cur);

    std::string section;
    for (const auto& line : lines) {
        if (!line.empty() && line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos) continue;
            section = line.substr(1, close - 1);
            const std::string rest =
                close + 2 <= line.size() ? line.substr(close + 2) : std::string();
            if (section == "stage") p.stage = rest;
            if (section == "horizon") p.horizon = std::strtoul(rest.c_str(), nullptr, 10);
            if (section == "seasonal_period")
                p.seasonal_period = std::strtoul(rest.c_str(), nullptr, 10);
            if (section == "channels") p.channels = split_csv(rest);
            if (section == "target_channels") p.target_channels = split_csv(rest);
            continue;
        }
        if (section == "history") {
            const auto space = line.find(' ');
            if (space == std::string::npos) continue;
            std::vector<double> row;
            for (const auto& f : split_csv(line.substr(space + 1)))
                row.push_back(std::strtod(f.c_str(), nullptr));
            p.history.push_back(std::move(row));
        } else if (section == "analysis_history") {
            auto doc = nlohmann::json::parse(line, nullptr, false);
            if (!doc.is_discarded()) p.analysis.push_back(std::move(doc));
        } else if (section == "prediction_results") {
            auto doc = nlohmann::json::parse(line, nullptr, false);
            if (!doc.is_discarded()) p.predictions.push_back(std::move(doc));
        }
    }
    return p;
}

class ScriptedPolicy final : public Policy {
public:
    explicit ScriptedPolicy(ScriptedPolicyConfig cfg) : cfg_(cfg) {}

    std::string name() const override { return "scripted"; }

    PolicyResponse respond(const std::string& rendered_prompt) override {
        const ParsedPrompt p = parse_prompt(rendered_prompt);
        if (p.stage == "feature_extraction") return {feature_turn(p), std::nullopt};
        if (p.stage == "prediction") return {prediction_turn(p), std::nullopt};
        return {reflect_turn(p), std::nullopt};
    }

private:
    std::string feature_turn(const ParsedPrompt& p) const {
        const std::string channel =
            p.target_channels.empty() ? std::string("?") : p.target_channels.front();
        std::string out;
        for (const char* tool : {"extract_data_quality", "extract_basic_statistics",
                                 "summarize_events"}) {
            nlohmann::ordered_json call;
            call["name"] = tool;
            call["arguments"] = nlohmann::ordered_json::object();
            if (std::string(tool) == "summarize_events") call["arguments"]["channel"] = channel;
            out += call.dump();
            out += '\n';
        }
        return out;
    }

    std::vector<double> target_column(const ParsedPrompt& p) const {
        std::size_t col = 0;
        if (!p.target_channels.empty()) {
            for (std::size_t i = 0; i < p.channels.size(); ++i)
                if (p.channels[i] == p.target_channels.front()) col = i;
        }
        std::vector<double> out;
        for (const auto& row : p.history)
            if (col < row.size() && std::isfinite(row[col])) out.push_back(row[col]);
        return out;
    }

    std::string prediction_turn(const ParsedPrompt& p) const {
        std::string dominant;
        bool any_abnormal = false;
        for (const auto& a : p.analysis) {
            const std::string tool = a.value("tool_name", std::string());
            if (tool == "summarize_events" && a.contains("payload"))
                dominant = a["payload"].value("dominant_label", std::string());
            if (tool == "extract_data_quality" && a.contains("payload") &&
                a["payload"].contains("channels"))
                for (const auto& ch : a["payload"]["channels"])
                    if (ch.contains("abnormal") && ch["abnormal"].is_boolean() &&
                        ch["abnormal"].get<bool>())
                        any_abnormal = true;
        }

        nlohmann::ordered_json args;
        if (p.analysis.empty()) {
            // No diagnostic evidence to route on.
            args["model"] = "naive";
        } else {
            const auto series = target_column(p);
            const double sd = stats::population_std(series);
            const double strength =
                series.size() >= 2 && sd > 1e-12
                    ? std::fabs(stats::ols_slope(series)) *
                          static_cast<double>(series.size() - 1) / sd
                    : 0.0;
            double entropy = 0.0;
            if (series.size() >= 3) entropy = stats::permutation_entropy(series, 3, 1);

            const std::size_t ar_order =
                cfg_.ar_order ? cfg_.ar_order
                              : std::max<std::size_t>(
                                    1, std::min<std::size_t>(8, p.seasonal_period / 4));
            const std::size_t ma_window =
                cfg_.ma_window ? cfg_.ma_window : std::max<std::size_t>(2, p.seasonal_period / 2);

            if (dominant == "Stable") {
                args["model"] = "seasonal_naive";
                args["period"] = p.seasonal_period;
            } else if ((dominant == "Rise" || dominant == "Decline") &&
                       strength > cfg_.trend_threshold) {
                args["model"] = "drift";
            } else if (dominant == "Oscillation" || entropy > cfg_.entropy_threshold) {
                args["model"] = "ar";
                args["order"] = ar_order;
            } else if (any_abnormal) {
                args["model"] = "moving_average";
                args["window"] = ma_window;
            } else {
                args["model"] = "seasonal_naive";
                args["period"] = p.seasonal_period;
            }
        }

        nlohmann::ordered_json call;
        call["name"] = "predict_time_series";
        call["arguments"] = std::move(args);
        return call.dump() + "\n";
    }

    std::string reflect_turn(const ParsedPrompt& p) const {
        if (p.predictions.empty())
            return "<think>no stored forecast available</think><answer></answer>";
        const auto& last = p.predictions.back();
        std::vector<std::vector<double>> forecast;
        if (last.contains("forecast"))
            for (const auto& row : last["forecast"]) {
                std::vector<double> r;
                for (const auto& v : row) r.push_back(v.get<double>());
                forecast.push_back(std::move(r));
            }

        std::string note = "emitting stored forecast";
        if (cfg_.refine && !p.history.empty() && !forecast.empty()) {
            // Clip to the visible history range, widened by the margin.
            const std::size_t cols = forecast.front().size();
            for (std::size_t c = 0; c < cols; ++c) {
                std::size_t hist_col = 0;
                if (c < p.target_channels.size()) {
                    for (std::size_t i = 0; i < p.channels.size(); ++i)
                        if (p.channels[i] == p.target_channels[c]) hist_col = i;
                }
                double lo = 0.0, hi = 0.0;
                bool first = true;
                for (const auto& row : p.history) {
                    if (hist_col >= row.size() || !std::isfinite(row[hist_col])) continue;
                    if (first) {
                        lo = hi = row[hist_col];
                        first = false;
                    } else {
                        lo = std::min(lo, row[hist_col]);
                        hi = std::max(hi, row[hist_col]);
                    }
                }
                if (first) continue;
                const double margin = cfg_.refine_margin * (hi - lo);
                for (auto& row : forecast)
                    if (c < row.size())
                        row[c] = std::clamp(row[c], lo - margin, hi + margin);
            }
            note = "emitting stored forecast clipped to history range";
        }

        std::string model_desc = "model";
        if (last.contains("model") && last["model"].contains("model"))
            model_desc = last["model"]["model"].get<std::string>();

        std::string out = "<think>selected " + model_desc + "; " + note + "</think>\n<answer>\n";
        for (const auto& row : forecast) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += format_full(row[c]);
            }
            out += '\n';
        }
        out += "</answer>";
        return out;
    }

    ScriptedPolicyConfig cfg_;
};

}  // namespace

std::unique_ptr<Policy> make_scripted_policy(const ScriptedPolicyConfig& config) {
    return std::make_unique<ScriptedPolicy>(config);
}

}  // namespace tsagent::agent
