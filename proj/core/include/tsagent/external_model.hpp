#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tsagent/models.hpp"
#include "tsagent/window.hpp"

namespace tsagent::models {

struct ExternalEndpoint {
    std::string url;  // e.g. http://localhost:9000 ; the client POSTs to <url>/forecast
    int timeout_ms = 30000;
};

/// Builds the plugin-protocol request body for a window:
/// {"history": LxC, "channel_names": [...], "horizon": H, "frequency": seconds,
///  "target_channels": [...]}.
nlohmann::ordered_json plugin_request(const Window& window, std::size_t horizon);

/// Validates a plugin-protocol response body against the request and returns
/// the forecast values. Throws TransportError on shape or content violations.
Matrix parse_plugin_response(const std::string& body, std::size_t horizon,
                             std::size_t target_channels, std::string* model_name = nullptr);

/// Named external forecasting endpoints speaking the plugin wire protocol.
class ExternalModelRegistry {
public:
    void register_endpoint(const std::string& name, ExternalEndpoint endpoint);
    bool has(const std::string& name) const { return endpoints_.count(name) > 0; }
    const ExternalEndpoint& endpoint(const std::string& name) const;

    /// POSTs /forecast and validates the response. Throws TransportError on
    /// timeout, non-200 status, malformed body, or shape mismatch.
    Forecast call(const std::string& name, const Window& window, std::size_t horizon) const;

private:
    std::map<std::string, ExternalEndpoint> endpoints_;
};

}  // namespace tsagent::models
