#include "tsagent/remote_policy.hpp"

#include <httplib.h>
#include <json.hpp>

#include "tsagent/errors.hpp"

namespace tsagent::agent {

namespace {

struct UrlParts {
    std::string base;  // scheme://host[:port]
    std::string path;  // /v1/chat/completions
};

UrlParts split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw ConfigError("remote policy: endpoint must be a full URL, got '" + url + "'");
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

class RemotePolicy final : public Policy {
public:
    explicit RemotePolicy(RemoteEndpointConfig cfg) : cfg_(std::move(cfg)), url_(split_url(cfg_.endpoint)) {}

    std::string name() const override { return "remote(" + cfg_.model + ")"; }

    PolicyResponse respond(const std::string& rendered_prompt) override {
        nlohmann::ordered_json body;
        body["model"] = cfg_.model;
        body["messages"] = nlohmann::ordered_json::array(
            {nlohmann::ordered_json{{"role", "system"}, {"content", cfg_.system_message}},
             nlohmann::ordered_json{{"role", "user"}, {"content", rendered_prompt}}});
        body["temperature"] = cfg_.temperature;
        body["max_tokens"] = cfg_.max_tokens;

        httplib::Client client(url_.base);
        client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
        client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

        auto res = client.Post(url_.path, headers, body.dump(), "application/json");
        if (!res)
            throw TransportError("remote policy: endpoint unreachable or timed out (" +
                                 cfg_.endpoint + ")");
        if (res->status != 200)
            throw TransportError("remote policy: HTTP " + std::to_string(res->status));

        nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
            !doc["choices"][0].contains("message") ||
            !doc["choices"][0]["message"].contains("content"))
            throw TransportError("remote policy: malformed chat response body");

        PolicyResponse out;
        out.text = doc["choices"][0]["message"]["content"].get<std::string>();
        if (doc.contains("usage") && doc["usage"].contains("completion_tokens") &&
            doc["usage"]["completion_tokens"].is_number())
            out.completion_tokens = doc["usage"]["completion_tokens"].get<long>();
        return out;
    }

private:
    RemoteEndpointConfig cfg_;
    UrlParts url_;
};

}  // namespace

std::unique_ptr<Policy> make_remote_policy(const RemoteEndpointConfig& config) {
    return std::make_unique<RemotePolicy>(config);
}

}  // namespace tsagent::agent
