#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsagent/matrix.hpp"

namespace tsagent {

/// Uniformly sampled multivariate series. Immutable after construction;
/// safe to share across episode workers.
class MultivariateSeries {
public:
    MultivariateSeries() = default;

    /// Validates all invariants: value shape matches timestamps/channels,
    /// timestamps strictly increasing with constant spacing equal to the
    /// declared frequency.
    MultivariateSeries(std::vector<std::int64_t> timestamps,
                       std::vector<std::string> channel_names, Matrix values,
                       std::int64_t frequency_seconds);

    std::size_t length() const { return timestamps_.size(); }
    std::size_t channel_count() const { return channel_names_.size(); }

    const std::vector<std::int64_t>& timestamps() const { return timestamps_; }
    const std::vector<std::string>& channel_names() const { return channel_names_; }
    const Matrix& values() const { return values_; }
    std::int64_t frequency_seconds() const { return frequency_seconds_; }

    /// Column index for a channel name; throws DataError if unknown.
    std::size_t channel_index(const std::string& name) const;

    std::string to_json_string() const;
    static MultivariateSeries from_json_string(const std::string& text);

private:
    std::vector<std::int64_t> timestamps_;
    std::vector<std::string> channel_names_;
    Matrix values_;
    std::int64_t frequency_seconds_ = 0;
};

struct CellRef {
    std::size_t row = 0;
    std::size_t col = 0;
};

/// Positions of missing observations, row-major order.
std::vector<CellRef> missing_positions(const MultivariateSeries& series);

/// Parses "2016-07-01 00:00:00", "2016-07-01T00:00:00[Z]", or "2016-07-01"
/// as UTC epoch seconds. Throws DataError on anything else.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);

}  // namespace tsagent
