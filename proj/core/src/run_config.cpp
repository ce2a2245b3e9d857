#include "tsagent/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "tsagent/errors.hpp"

namespace tsagent::eval {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

class KeyReader {
public:
    explicit KeyReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

    std::string str(const std::string& key, const std::string& def) {
        seen_.insert(key);
        auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }
    double num(const std::string& key, double def) {
        seen_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return def;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end != it->second.c_str() + it->second.size())
            throw ConfigError("config: key '" + key + "' is not numeric: " + it->second);
        return v;
    }
    long long integer(const std::string& key, long long def) {
        const double v = num(key, static_cast<double>(def));
        return static_cast<long long>(v);
    }
    bool boolean(const std::string& key, bool def) {
        seen_.insert(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return def;
        const std::string v = it->second;
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config: key '" + key + "' is not boolean: " + v);
    }

    void check_unknown(const std::map<std::string, std::string>& kv) const {
        for (const auto& [key, value] : kv) {
            if (seen_.count(key)) continue;
            if (key.rfind("models.external.", 0) == 0) continue;  // dynamic names
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

private:
    const std::map<std::string, std::string>& kv_;
    std::set<std::string> seen_;
};

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " has no '='");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

RunConfig build_run_config(const std::map<std::string, std::string>& kv) {
    KeyReader r(kv);
    RunConfig c;

    c.dataset_path = r.str("dataset.path", "");
    c.dataset_id = r.str("dataset.id", "dataset");
    c.schema.timestamp_column = r.str("dataset.timestamp_column", "date");
    c.schema.value_columns = split_list(r.str("dataset.value_columns", ""));

    c.window.lookback = static_cast<std::size_t>(r.integer("window.lookback", 96));
    c.window.horizon = static_cast<std::size_t>(r.integer("window.horizon", 96));
    c.window.stride = static_cast<std::size_t>(r.integer("window.stride", 1));
    c.window.seasonal_period = static_cast<std::size_t>(r.integer("window.seasonal_period", 24));
    c.window.target_channels = split_list(r.str("window.target_channels", ""));

    c.split.train = r.num("split.train", 0.7);
    c.split.val = r.num("split.val", 0.1);
    c.split.test = r.num("split.test", 0.2);

    c.policy_kind = r.str("policy.kind", "scripted");
    if (c.policy_kind != "scripted" && c.policy_kind != "remote")
        throw ConfigError("config: policy.kind must be scripted or remote");

    c.scripted.trend_threshold = r.num("scripted.trend_threshold", 1.0);
    c.scripted.entropy_threshold = r.num("scripted.entropy_threshold", 0.75);
    c.scripted.refine = r.boolean("scripted.refine", false);
    c.scripted.refine_margin = r.num("scripted.refine_margin", 0.1);
    c.scripted.ma_window = static_cast<std::size_t>(r.integer("scripted.ma_window", 0));
    c.scripted.ar_order = static_cast<std::size_t>(r.integer("scripted.ar_order", 0));

    c.llm.endpoint = r.str("llm.endpoint", "");
    c.llm.api_key = r.str("llm.api_key", "");
    c.llm.model = r.str("llm.model", "default");
    c.llm.temperature = r.num("llm.temperature", 0.0);
    c.llm.max_tokens = r.integer("llm.max_tokens", 4096);
    c.llm.timeout_ms = static_cast<int>(r.integer("llm.timeout_ms", 30000));

    c.episode.max_retries = static_cast<std::size_t>(r.integer("episode.max_retries", 2));
    c.episode.prompt.trunc_len = static_cast<std::size_t>(r.integer("episode.trunc_len", 48));
    c.episode.prompt.value_decimals =
        static_cast<int>(r.integer("episode.value_decimals", 4));

    auto& tk = c.episode.toolkit;
    tk.changepoint_window =
        static_cast<std::size_t>(r.integer("toolkit.changepoint_window", 12));
    tk.changepoint_threshold = r.num("toolkit.changepoint_threshold", 3.0);
    tk.stable_window = static_cast<std::size_t>(r.integer("toolkit.stable_window", 12));
    tk.stable_percentile = r.num("toolkit.stable_percentile", 25.0);
    tk.extrema_neighborhood =
        static_cast<std::size_t>(r.integer("toolkit.extrema_neighborhood", 2));
    tk.event_segment_length =
        static_cast<std::size_t>(r.integer("toolkit.event_segment_length", 0));
    tk.event_tau_stable = r.num("toolkit.event_tau_stable", 0.25);
    tk.event_tau_trend = r.num("toolkit.event_tau_trend", 0.5);

    auto& w = c.episode.weights;
    w.w_acc = r.num("reward.w_acc", 0.6);
    w.w_trend = r.num("reward.w_trend", 0.1);
    w.w_seas = r.num("reward.w_seas", 0.1);
    w.w_turn = r.num("reward.w_turn", 0.2);
    w.p_format = r.num("reward.p_format", 1.0);
    w.p_length_answer = r.num("reward.p_length_answer", 0.5);
    w.p_length_response = r.num("reward.p_length_response", 0.1);
    w.token_budget = r.integer("reward.token_budget", 4096);
    c.episode.turning_tolerance =
        static_cast<std::size_t>(r.integer("reward.turning_tolerance", 2));

    c.episode.ablation.disable_feature_tools =
        r.boolean("ablation.disable_feature_tools", false);
    c.episode.ablation.disable_model_tools = r.boolean("ablation.disable_model_tools", false);
    c.episode.ablation.disable_refine = r.boolean("ablation.disable_refine", false);
    c.episode.reward_switches.pred_error = !r.boolean("ablation.disable_pred_error", false);
    c.episode.reward_switches.trend_seasonal =
        !r.boolean("ablation.disable_trend_seasonal", false);
    c.episode.reward_switches.turning = !r.boolean("ablation.disable_turning", false);
    c.episode.reward_switches.length_penalty =
        !r.boolean("ablation.disable_length_penalty", false);
    if (c.episode.ablation.disable_refine) c.scripted.refine = false;

    c.curriculum.order = static_cast<std::size_t>(r.integer("curriculum.order", 3));
    c.curriculum.delay = static_cast<std::size_t>(r.integer("curriculum.delay", 1));
    c.curriculum.epochs_per_stage =
        static_cast<std::size_t>(r.integer("curriculum.epochs_per_stage", 1));
    {
        nlohmann::json tj;
        tj["model"] = r.str("curriculum.teacher", "seasonal_naive");
        tj["period"] = r.integer("curriculum.teacher_period",
                                 static_cast<long long>(c.window.seasonal_period));
        tj["window"] = r.integer("curriculum.teacher_window", 2);
        tj["order"] = r.integer("curriculum.teacher_order", 2);
        tj["endpoint"] = r.str("curriculum.teacher_endpoint", "");
        c.curriculum.teacher = models::ForecastModelId::from_json(tj);
    }

    c.seed = static_cast<unsigned long long>(r.integer("run.seed", 0));
    c.out_dir = r.str("run.out_dir", "out");
    c.subsample_stride = static_cast<std::size_t>(r.integer("run.subsample_stride", 1));
    c.workers = static_cast<std::size_t>(r.integer("run.workers", 1));
    c.include_timing = r.boolean("run.include_timing", false);
    c.episode.include_timing = c.include_timing;
    c.episode.seed = c.seed;

    // models.external.<name>.url / .timeout_ms
    for (const auto& [key, value] : kv) {
        const std::string prefix = "models.external.";
        if (key.rfind(prefix, 0) != 0) continue;
        const std::string rest = key.substr(prefix.size());
        const auto dot = rest.rfind('.');
        if (dot == std::string::npos)
            throw ConfigError("config: malformed key '" + key + "'");
        const std::string name = rest.substr(0, dot);
        const std::string field = rest.substr(dot + 1);
        auto& ep = c.external_endpoints[name];
        if (field == "url")
            ep.url = value;
        else if (field == "timeout_ms")
            ep.timeout_ms = std::atoi(value.c_str());
        else
            throw ConfigError("config: unknown external endpoint field '" + field + "'");
    }

    r.check_unknown(kv);
    c.window.validate();
    c.episode.weights.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    auto kv = read_config_file(path);
    // Environment overrides for the llm.* keys.
    const std::pair<const char*, const char*> env_keys[] = {
        {"TSAGENT_LLM_ENDPOINT", "llm.endpoint"},
        {"TSAGENT_LLM_API_KEY", "llm.api_key"},
        {"TSAGENT_LLM_MODEL", "llm.model"},
    };
    for (const auto& [env, key] : env_keys)
        if (const char* v = std::getenv(env)) kv[key] = v;
    return build_run_config(kv);
}

nlohmann::ordered_json RunConfig::resolved() const {
    nlohmann::ordered_json j;
    j["dataset.path"] = dataset_path;
    j["dataset.id"] = dataset_id;
    j["dataset.timestamp_column"] = schema.timestamp_column;
    j["dataset.value_columns"] = schema.value_columns;
    j["window.lookback"] = window.lookback;
    j["window.horizon"] = window.horizon;
    j["window.stride"] = window.stride;
    j["window.seasonal_period"] = window.seasonal_period;
    j["window.target_channels"] = window.target_channels;
    j["split.train"] = split.train;
    j["split.val"] = split.val;
    j["split.test"] = split.test;
    j["policy.kind"] = policy_kind;
    j["scripted.trend_threshold"] = scripted.trend_threshold;
    j["scripted.entropy_threshold"] = scripted.entropy_threshold;
    j["scripted.refine"] = scripted.refine;
    j["scripted.refine_margin"] = scripted.refine_margin;
    j["scripted.ma_window"] = scripted.ma_window;
    j["scripted.ar_order"] = scripted.ar_order;
    j["llm.endpoint"] = llm.endpoint;
    j["llm.model"] = llm.model;
    j["llm.temperature"] = llm.temperature;
    j["llm.max_tokens"] = llm.max_tokens;
    j["llm.timeout_ms"] = llm.timeout_ms;
    j["episode.max_retries"] = episode.max_retries;
    j["episode.trunc_len"] = episode.prompt.trunc_len;
    j["episode.value_decimals"] = episode.prompt.value_decimals;
    j["toolkit.changepoint_window"] = episode.toolkit.changepoint_window;
    j["toolkit.changepoint_threshold"] = episode.toolkit.changepoint_threshold;
    j["toolkit.stable_window"] = episode.toolkit.stable_window;
    j["toolkit.stable_percentile"] = episode.toolkit.stable_percentile;
    j["toolkit.extrema_neighborhood"] = episode.toolkit.extrema_neighborhood;
    j["toolkit.event_segment_length"] = episode.toolkit.event_segment_length;
    j["toolkit.event_tau_stable"] = episode.toolkit.event_tau_stable;
    j["toolkit.event_tau_trend"] = episode.toolkit.event_tau_trend;
    j["reward.w_acc"] = episode.weights.w_acc;
    j["reward.w_trend"] = episode.weights.w_trend;
    j["reward.w_seas"] = episode.weights.w_seas;
    j["reward.w_turn"] = episode.weights.w_turn;
    j["reward.p_format"] = episode.weights.p_format;
    j["reward.p_length_answer"] = episode.weights.p_length_answer;
    j["reward.p_length_response"] = episode.weights.p_length_response;
    j["reward.token_budget"] = episode.weights.token_budget;
    j["reward.turning_tolerance"] = episode.turning_tolerance;
    j["ablation.disable_feature_tools"] = episode.ablation.disable_feature_tools;
    j["ablation.disable_model_tools"] = episode.ablation.disable_model_tools;
    j["ablation.disable_refine"] = episode.ablation.disable_refine;
    j["ablation.disable_pred_error"] = !episode.reward_switches.pred_error;
    j["ablation.disable_trend_seasonal"] = !episode.reward_switches.trend_seasonal;
    j["ablation.disable_turning"] = !episode.reward_switches.turning;
    j["ablation.disable_length_penalty"] = !episode.reward_switches.length_penalty;
    j["curriculum.order"] = curriculum.order;
    j["curriculum.delay"] = curriculum.delay;
    j["curriculum.epochs_per_stage"] = curriculum.epochs_per_stage;
    j["curriculum.teacher"] = curriculum.teacher.to_string();
    j["run.seed"] = seed;
    j["run.out_dir"] = out_dir;
    j["run.subsample_stride"] = subsample_stride;
    j["run.workers"] = workers;
    j["run.include_timing"] = include_timing;
    for (const auto& [name, ep] : external_endpoints) {
        j["models.external." + name + ".url"] = ep.url;
        j["models.external." + name + ".timeout_ms"] = ep.timeout_ms;
    }
    return j;
}

}  // namespace tsagent::eval
