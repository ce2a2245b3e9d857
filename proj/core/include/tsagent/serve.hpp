#pragma once

#include <string>

#include <httplib.h>

#include "tsagent/models.hpp"
#include "tsagent/toolkit.hpp"

namespace tsagent::eval {

struct ServeConfig {
    models::ForecastModelId default_model = models::ForecastModelId::naive();
    toolkit::ToolkitConfig toolkit;
    std::size_t default_seasonal_period = 24;
};

/// Installs the tool-serving routes on an httplib server:
///   GET  /health        -> {"status":"ok"}
///   GET  /tools         -> {"tools": [registry entries]}
///   POST /tools/<name>  -> run one diagnostic tool over a posted window
///   POST /forecast      -> plugin wire protocol (optional "model" override)
/// Status codes: 200 ok, 400 contract error, 404 unknown tool, 500 internal.
void configure_tool_server(httplib::Server& server, const ServeConfig& config);

}  // namespace tsagent::eval
