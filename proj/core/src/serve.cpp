#include "tsagent/serve.hpp"

#include <json.hpp>

#include "tsagent/errors.hpp"

namespace tsagent::eval {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json error_body(const std::string& message) {
    ordered_json j;
    j["error"] = message;
    return j;
}

void reply(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

Window window_from_body(const json& j, std::size_t default_period, std::size_t horizon) {
    if (!j.contains("history") || !j["history"].is_array() || j["history"].empty())
        throw DataError("request: missing or empty 'history'");
    if (!j.contains("channel_names") || !j["channel_names"].is_array())
        throw DataError("request: missing 'channel_names'");

    const auto names = j["channel_names"].get<std::vector<std::string>>();
    const auto& rows = j["history"];
    Matrix hist(rows.size(), names.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != names.size())
            throw DataError("request: history row " + std::to_string(r) +
                            " does not match channel_names");
        for (std::size_t c = 0; c < names.size(); ++c)
            hist(r, c) = rows[r][c].is_null() ? missing_value() : rows[r][c].get<double>();
    }

    Window w;
    w.history = std::move(hist);
    w.channel_names = names;
    w.frequency_seconds = j.value("frequency", std::int64_t{3600});
    w.start_timestamp = j.value("start_timestamp", std::int64_t{0});
    w.spec.lookback = rows.size();
    w.spec.horizon = horizon;
    w.spec.stride = 1;
    w.spec.seasonal_period = j.value("seasonal_period", default_period);
    if (j.contains("target_channels"))
        w.spec.target_channels = j["target_channels"].get<std::vector<std::string>>();
    return w;
}

}  // namespace

void configure_tool_server(httplib::Server& server, const ServeConfig& config) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, ordered_json{{"status", "ok"}});
    });

    server.Get("/tools", [](const httplib::Request&, httplib::Response& res) {
        ordered_json j;
        auto tools = ordered_json::array();
        for (const auto& spec : toolkit::tool_registry()) tools.push_back(spec.to_json());
        j["tools"] = std::move(tools);
        reply(res, 200, j);
    });

    server.Post(R"(/tools/([a-z_]+))", [config](const httplib::Request& req,
                                                httplib::Response& res) {
        const std::string name = req.matches[1];
        if (!toolkit::is_diagnostic_tool(name)) {
            reply(res, 404, error_body("unknown tool '" + name + "'"));
            return;
        }
        try {
            const json body = json::parse(req.body);
            const Window window =
                window_from_body(body, config.default_seasonal_period, 1);
            const json args =
                body.contains("arguments") ? body["arguments"] : json::object();
            const auto result = toolkit::run_tool(name, args, window, config.toolkit);
            reply(res, 200, result.to_json());
        } catch (const json::exception& e) {
            reply(res, 400, error_body(std::string("malformed request body: ") + e.what()));
        } catch (const DataError& e) {
            reply(res, 400, error_body(e.what()));
        } catch (const ConfigError& e) {
            reply(res, 400, error_body(e.what()));
        } catch (const std::exception& e) {
            reply(res, 500, error_body(e.what()));
        }
    });

    server.Post("/forecast", [config](const httplib::Request& req, httplib::Response& res) {
        try {
            const json body = json::parse(req.body);
            if (!body.contains("horizon") || !body["horizon"].is_number_unsigned()) {
                reply(res, 400, error_body("request: missing positive 'horizon'"));
                return;
            }
            const auto horizon = body["horizon"].get<std::size_t>();
            const Window window =
                window_from_body(body, config.default_seasonal_period, horizon);

            models::ForecastModelId model = config.default_model;
            if (body.contains("model"))
                model = body["model"].is_object()
                            ? models::ForecastModelId::from_json(body["model"])
                            : models::ForecastModelId::from_json(body);

            const auto forecast = models::predict_time_series(model, window, horizon);
            ordered_json out;
            auto rows = ordered_json::array();
            for (std::size_t r = 0; r < forecast.values.rows(); ++r) {
                auto row = ordered_json::array();
                for (std::size_t c = 0; c < forecast.values.cols(); ++c)
                    row.push_back(forecast.values(r, c));
                rows.push_back(std::move(row));
            }
            out["forecast"] = std::move(rows);
            out["model_name"] = model.to_string();
            reply(res, 200, out);
        } catch (const json::exception& e) {
            reply(res, 400, error_body(std::string("malformed request body: ") + e.what()));
        } catch (const DataError& e) {
            reply(res, 400, error_body(e.what()));
        } catch (const ConfigError& e) {
            reply(res, 400, error_body(e.what()));
        } catch (const std::exception& e) {
            reply(res, 500, error_body(e.what()));
        }
    });
}

}  // namespace tsagent::eval
