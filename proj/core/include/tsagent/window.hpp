#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsagent/matrix.hpp"
#include "tsagent/series.hpp"

namespace tsagent {

struct WindowSpec {
    std::size_t lookback = 96;
    std::size_t horizon = 96;
    std::size_t stride = 1;
    std::size_t seasonal_period = 24;
    /// Channels the forecast is scored on. Empty means all channels.
    std::vector<std::string> target_channels;

    void validate() const;
};

/// One forecasting task instance: a contiguous history slice and, for
/// training/evaluation windows, the ground-truth target that immediately
/// follows it. Self-contained (carries channel names and timing) so tools,
/// prompts, and the plugin protocol need no backreference to the source series.
struct Window {
    Matrix history;                 // lookback x C
    std::optional<Matrix> context;  // reserved for known-future exogenous inputs
    std::optional<Matrix> target;   // horizon x C_target, ground truth
    std::size_t origin_index = 0;
    WindowSpec spec;

    std::vector<std::string> channel_names;
    std::int64_t frequency_seconds = 1;
    std::int64_t start_timestamp = 0;

    std::size_t lookback() const { return spec.lookback; }
    std::size_t horizon() const { return spec.horizon; }

    /// Names of the channels the forecast covers.
    std::vector<std::string> target_names() const;
    /// Column indices of the target channels within history.
    std::vector<std::size_t> target_indices() const;
    /// History restricted to the target channels (lookback x C_target).
    Matrix target_history() const;
    /// Timestamp of history row i (or of forecast step i - lookback).
    std::int64_t timestamp_at(std::size_t i) const {
        return start_timestamp + static_cast<std::int64_t>(i) * frequency_seconds;
    }
};

/// Enumerates evaluation windows at stride spacing. Count is
/// floor((T - L - H)/stride) + 1; history and target are contiguous,
/// non-overlapping slices of the source.
std::vector<Window> make_windows(const MultivariateSeries& series, const WindowSpec& spec);

}  // namespace tsagent
