#pragma once

#include <string>
#include <vector>

#include "tsagent/series.hpp"

namespace tsagent {

/// Column mapping for ingestion. Comma-separated files with a header row and
/// dot decimal separator (the public ETT/EPF layout).
struct CsvSchema {
    std::string timestamp_column = "date";
    /// Channels to load, in this order. Empty means every non-timestamp column.
    std::vector<std::string> value_columns;
};

/// Loads and validates a CSV file. Malformed or empty numeric cells become
/// missing-value sentinels (recoverable via missing_positions). Irregular or
/// non-monotone timestamps are ingestion errors, never resampled.
MultivariateSeries load_csv(const std::string& path, const CsvSchema& schema = {});

}  // namespace tsagent
