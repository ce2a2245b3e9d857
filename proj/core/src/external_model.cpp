#include "tsagent/external_model.hpp"

#include <cmath>

#include <httplib.h>

#include "tsagent/errors.hpp"

namespace tsagent::models {

nlohmann::ordered_json plugin_request(const Window& window, std::size_t horizon) {
    nlohmann::ordered_json j;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < window.history.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < window.history.cols(); ++c) {
            const double v = window.history(r, c);
            if (is_missing(v))
                row.push_back(nullptr);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    j["history"] = std::move(rows);
    j["channel_names"] = window.channel_names;
    j["horizon"] = horizon;
    j["frequency"] = window.frequency_seconds;
    j["target_channels"] = window.target_names();
    return j;
}

Matrix parse_plugin_response(const std::string& body, std::size_t horizon,
                             std::size_t target_channels, std::string* model_name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("external: malformed response body: ") + e.what());
    }
    if (!j.contains("forecast") || !j["forecast"].is_array())
        throw TransportError("external: response missing 'forecast' array");
    const auto& rows = j["forecast"];
    if (rows.size() != horizon)
        throw TransportError("external: forecast has " + std::to_string(rows.size()) +
                             " rows, expected horizon " + std::to_string(horizon));
    Matrix m(horizon, target_channels);
    for (std::size_t r = 0; r < horizon; ++r) {
        if (!rows[r].is_array() || rows[r].size() != target_channels)
            throw TransportError("external: forecast row " + std::to_string(r) + " has " +
                                 std::to_string(rows[r].size()) + " columns, expected " +
                                 std::to_string(target_channels));
        for (std::size_t c = 0; c < target_channels; ++c) {
            if (!rows[r][c].is_number())
                throw TransportError("external: non-numeric forecast cell");
            const double v = rows[r][c].get<double>();
            if (!std::isfinite(v)) throw TransportError("external: non-finite forecast value");
            m(r, c) = v;
        }
    }
    if (model_name && j.contains("model_name") && j["model_name"].is_string())
        *model_name = j["model_name"].get<std::string>();
    return m;
}

void ExternalModelRegistry::register_endpoint(const std::string& name, ExternalEndpoint endpoint) {
    if (name.empty()) throw ConfigError("external registry: empty endpoint name");
    if (endpoint.url.empty()) throw ConfigError("external registry: empty url for '" + name + "'");
    endpoints_[name] = std::move(endpoint);
}

const ExternalEndpoint& ExternalModelRegistry::endpoint(const std::string& name) const {
    auto it = endpoints_.find(name);
    if (it == endpoints_.end())
        throw ConfigError("external registry: unknown endpoint '" + name + "'");
    return it->second;
}

Forecast ExternalModelRegistry::call(const std::string& name, const Window& window,
                                     std::size_t horizon) const {
    const ExternalEndpoint& ep = endpoint(name);
    httplib::Client client(ep.url);
    client.set_connection_timeout(0, ep.timeout_ms * 1000);
    client.set_read_timeout(ep.timeout_ms / 1000, (ep.timeout_ms % 1000) * 1000);

    const std::string body = plugin_request(window, horizon).dump();
    auto res = client.Post("/forecast", body, "application/json");
    if (!res)
        throw TransportError("external '" + name + "': endpoint unreachable or timed out (" +
                             ep.url + ")");
    if (res->status >= 500)
        throw TransportError("external '" + name + "': upstream failure, HTTP " +
                             std::to_string(res->status));
    if (res->status != 200)
        throw TransportError("external '" + name + "': contract error, HTTP " +
                             std::to_string(res->status));

    std::string model_name;
    Forecast fc;
    fc.values =
        parse_plugin_response(res->body, horizon, window.target_names().size(), &model_name);
    fc.model_id = ForecastModelId::external(name);
    if (!model_name.empty()) {
        nlohmann::ordered_json note;
        note["model_name"] = model_name;
        fc.fit_notes = std::move(note);
    }
    return fc;
}

}  // namespace tsagent::models
