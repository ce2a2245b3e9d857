#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "support/fixtures.hpp"
#include "tsagent/batch.hpp"
#include "tsagent/episode.hpp"
#include "tsagent/errors.hpp"
#include "tsagent/remote_policy.hpp"
#include "tsagent/serve.hpp"

using namespace tsagent;

namespace {

struct LiveServer {
    httplib::Server server;
    std::thread runner;
    int port = 0;

    explicit LiveServer(const std::function<void(httplib::Server&)>& configure) {
        configure(server);
        port = server.bind_to_any_port("127.0.0.1");
        runner = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LiveServer() {
        server.stop();
        runner.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

agent::EpisodeConfig default_config() { return {}; }

Window fixture_window(std::uint64_t seed = 77) {
    auto series = fixtures::mixed_regime_series(96 + 24, seed);
    WindowSpec spec;
    spec.lookback = 96;
    spec.horizon = 24;
    spec.seasonal_period = 24;
    return make_windows(series, spec).front();
}

/// Chat-completions stub that replays canned responses in request order.
void configure_chat_replay(httplib::Server& server, std::shared_ptr<std::vector<std::string>> script,
                           std::shared_ptr<std::atomic<std::size_t>> cursor,
                           long report_tokens = -1) {
    server.Post("/v1/chat/completions",
                [script, cursor, report_tokens](const httplib::Request& req,
                                                httplib::Response& res) {
                    const auto body = nlohmann::json::parse(req.body);
                    REQUIRE(body.contains("model"));
                    REQUIRE(body.contains("messages"));
                    REQUIRE(body["messages"].size() == 2);
                    REQUIRE(body["messages"][0]["role"] == "system");
                    REQUIRE(body["messages"][1]["role"] == "user");

                    const std::size_t i = std::min(cursor->fetch_add(1), script->size() - 1);
                    nlohmann::ordered_json out;
                    out["choices"] = nlohmann::ordered_json::array(
                        {nlohmann::ordered_json{
                            {"message", nlohmann::ordered_json{{"role", "assistant"},
                                                               {"content", (*script)[i]}}}}});
                    if (report_tokens >= 0)
                        out["usage"] =
                            nlohmann::ordered_json{{"completion_tokens", report_tokens}};
                    res.set_content(out.dump(), "application/json");
                });
}

}  // namespace

TEST_CASE("serve-tools: health, registry, tool execution, and error codes") {
    eval::ServeConfig cfg;
    LiveServer live([&](httplib::Server& s) { eval::configure_tool_server(s, cfg); });
    httplib::Client client(live.url());

    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);

    auto tools = client.Get("/tools");
    REQUIRE(tools);
    const auto registry = nlohmann::json::parse(tools->body);
    CHECK(registry["tools"].size() == 6);

    // Execute a diagnostic tool over the wire.
    nlohmann::ordered_json body;
    body["history"] = {{1.0}, {2.0}, {3.0}, {4.0}, {5.0}};
    body["channel_names"] = {"y"};
    body["frequency"] = 3600;
    auto stats = client.Post("/tools/extract_basic_statistics", body.dump(), "application/json");
    REQUIRE(stats);
    CHECK(stats->status == 200);
    const auto payload = nlohmann::json::parse(stats->body);
    CHECK(payload["tool_name"] == "extract_basic_statistics");
    CHECK(payload["payload"]["channels"][0]["median"].get<double>() == 3.0);

    // Unknown tool -> 404; malformed body -> 400.
    auto missing = client.Post("/tools/unknown_tool", body.dump(), "application/json");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto bad = client.Post("/tools/extract_basic_statistics", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    auto empty = client.Post("/tools/extract_basic_statistics", R"({"history":[]})",
                             "application/json");
    REQUIRE(empty);
    CHECK(empty->status == 400);
}

TEST_CASE("serve-tools /forecast speaks the plugin protocol end to end") {
    eval::ServeConfig cfg;
    LiveServer live([&](httplib::Server& s) { eval::configure_tool_server(s, cfg); });

    // Drive it through the plugin client, exactly as an external model.
    models::ExternalModelRegistry registry;
    registry.register_endpoint("self", {live.url(), 2000});
    const auto w = fixtures::make_window({1.0, 2.0, 1.0, 2.0}, 2, 3);
    const auto fc = registry.call("self", w, 3);
    // Server default model is naive -> repeat the last value.
    CHECK(fc.values(0, 0) == 2.0);
    CHECK(fc.values(2, 0) == 2.0);

    // Explicit model override in the body.
    httplib::Client client(live.url());
    auto request = models::plugin_request(w, 3);
    request["model"] = nlohmann::ordered_json{{"model", "seasonal_naive"}, {"period", 2}};
    auto res = client.Post("/forecast", request.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto doc = nlohmann::json::parse(res->body);
    CHECK(doc["forecast"][0][0].get<double>() == 1.0);
    CHECK(doc["forecast"][1][0].get<double>() == 2.0);
    CHECK(doc["model_name"].get<std::string>() == "seasonal_naive(period=2)");

    // Contract violations earn a 400.
    auto no_horizon = client.Post("/forecast", R"({"history":[[1.0]],"channel_names":["y"]})",
                                  "application/json");
    REQUIRE(no_horizon);
    CHECK(no_horizon->status == 400);
}

TEST_CASE("remote policy replaying the scripted transcript reproduces the trace "
          "byte-for-byte") {
    const auto window = fixture_window();

    auto scripted = agent::make_scripted_policy({});
    const auto golden = agent::run_episode(window, *scripted, default_config());
    REQUIRE(golden.status == agent::EpisodeStatus::Completed);

    auto script = std::make_shared<std::vector<std::string>>();
    for (const auto& turn : golden.turns) script->push_back(turn.raw_response);
    auto cursor = std::make_shared<std::atomic<std::size_t>>(0);

    LiveServer live([&](httplib::Server& s) { configure_chat_replay(s, script, cursor); });
    agent::RemoteEndpointConfig remote_cfg;
    remote_cfg.endpoint = live.url() + "/v1/chat/completions";
    remote_cfg.model = "replay";
    auto remote = agent::make_remote_policy(remote_cfg);

    const auto replayed = agent::run_episode(window, *remote, default_config());
    CHECK(replayed.serialize(false) == golden.serialize(false));
}

TEST_CASE("a 500-returning chat endpoint yields failed-transport, never a crash") {
    LiveServer live([](httplib::Server& s) {
        s.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
            res.status = 500;
            res.set_content("upstream exploded", "text/plain");
        });
    });
    agent::RemoteEndpointConfig cfg;
    cfg.endpoint = live.url() + "/v1/chat/completions";
    auto remote = agent::make_remote_policy(cfg);
    const auto trace = agent::run_episode(fixture_window(), *remote, default_config());
    CHECK(trace.status == agent::EpisodeStatus::FailedTransport);
    CHECK_FALSE(trace.reward.has_value());
}

TEST_CASE("an unreachable chat endpoint also fails as transport") {
    agent::RemoteEndpointConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.timeout_ms = 200;
    auto remote = agent::make_remote_policy(cfg);
    const auto trace = agent::run_episode(fixture_window(), *remote, default_config());
    CHECK(trace.status == agent::EpisodeStatus::FailedTransport);
}

TEST_CASE("reported completion tokens feed the response-length penalty") {
    const auto window = fixture_window();
    auto scripted = agent::make_scripted_policy({});
    const auto golden = agent::run_episode(window, *scripted, default_config());
    auto script = std::make_shared<std::vector<std::string>>();
    for (const auto& turn : golden.turns) script->push_back(turn.raw_response);

    auto run_with_tokens = [&](long tokens) {
        auto cursor = std::make_shared<std::atomic<std::size_t>>(0);
        LiveServer live([&](httplib::Server& s) {
            configure_chat_replay(s, script, cursor, tokens);
        });
        agent::RemoteEndpointConfig cfg;
        cfg.endpoint = live.url() + "/v1/chat/completions";
        auto remote = agent::make_remote_policy(cfg);
        return agent::run_episode(window, *remote, default_config());
    };

    const auto at_budget = run_with_tokens(4096);
    const auto over_budget = run_with_tokens(4097);
    REQUIRE(at_budget.reward.has_value());
    REQUIRE(over_budget.reward.has_value());
    CHECK(at_budget.reward->response_tokens == 4096);
    CHECK(over_budget.reward->total < at_budget.reward->total);
}

TEST_CASE("remote policy surfaces malformed chat bodies as transport errors") {
    LiveServer live([](httplib::Server& s) {
        s.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"unexpected":"shape"})", "application/json");
        });
    });
    agent::RemoteEndpointConfig cfg;
    cfg.endpoint = live.url() + "/v1/chat/completions";
    auto remote = agent::make_remote_policy(cfg);
    CHECK_THROWS_AS(remote->respond("prompt"), TransportError);
}
