#pragma once

#include <memory>
#include <string>

#include "tsagent/policy.hpp"

namespace tsagent::agent {

/// Chat-completions style endpoint configuration. The endpoint is the full
/// request URL, e.g. "http://localhost:8081/v1/chat/completions".
struct RemoteEndpointConfig {
    std::string endpoint;
    std::string api_key;
    std::string model = "default";
    double temperature = 0.0;
    long max_tokens = 4096;
    int timeout_ms = 30000;
    std::string system_message =
        "You are a time series forecasting agent. Follow the stage instructions "
        "and the output contract exactly.";
};

/// Policy over the chat wire protocol: each turn POSTs
/// {"model", "messages": [system, user], "temperature", "max_tokens"} and
/// returns choices[0].message.content verbatim, with usage.completion_tokens
/// reported when present. Transport problems raise TransportError.
std::unique_ptr<Policy> make_remote_policy(const RemoteEndpointConfig& config);

}  // namespace tsagent::agent
