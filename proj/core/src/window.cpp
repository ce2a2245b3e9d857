#include "tsagent/window.hpp"

#include "tsagent/errors.hpp"

namespace tsagent {

void WindowSpec::validate() const {
    if (lookback == 0) throw ConfigError("window: lookback must be positive");
    if (horizon == 0) throw ConfigError("window: horizon must be positive");
    if (stride == 0) throw ConfigError("window: stride must be >= 1");
    if (seasonal_period == 0) throw ConfigError("window: seasonal_period must be positive");
}

std::vector<std::string> Window::target_names() const {
    if (spec.target_channels.empty()) return channel_names;
    return spec.target_channels;
}

std::vector<std::size_t> Window::target_indices() const {
    std::vector<std::size_t> idx;
    if (spec.target_channels.empty()) {
        idx.resize(channel_names.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        return idx;
    }
    for (const auto& name : spec.target_channels) {
        bool found = false;
        for (std::size_t i = 0; i < channel_names.size(); ++i) {
            if (channel_names[i] == name) {
                idx.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw DataError("window: unknown target channel '" + name + "'");
    }
    return idx;
}

Matrix Window::target_history() const { return history.select_columns(target_indices()); }

std::vector<Window> make_windows(const MultivariateSeries& series, const WindowSpec& spec) {
    spec.validate();
    const std::size_t need = spec.lookback + spec.horizon;
    if (series.length() < need)
        throw DataError("windows: series length " + std::to_string(series.length()) +
                        " below required minimum " + std::to_string(need) + " (lookback " +
                        std::to_string(spec.lookback) + " + horizon " +
                        std::to_string(spec.horizon) + ")");

    std::vector<std::size_t> target_idx;
    if (spec.target_channels.empty()) {
        target_idx.resize(series.channel_count());
        for (std::size_t i = 0; i < target_idx.size(); ++i) target_idx[i] = i;
    } else {
        for (const auto& name : spec.target_channels) target_idx.push_back(series.channel_index(name));
    }

    const std::size_t count = (series.length() - need) / spec.stride + 1;
    std::vector<Window> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t origin = i * spec.stride;
        Window w;
        w.history = series.values().slice_rows(origin, spec.lookback);
        w.target =
            series.values().slice_rows(origin + spec.lookback, spec.horizon).select_columns(target_idx);
        w.origin_index = origin;
        w.spec = spec;
        w.channel_names = series.channel_names();
        w.frequency_seconds = series.frequency_seconds();
        w.start_timestamp = series.timestamps()[origin];
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace tsagent
