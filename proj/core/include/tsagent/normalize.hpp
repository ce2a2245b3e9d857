#pragma once

#include <vector>

#include "tsagent/series.hpp"

namespace tsagent {

struct NormalizationStats {
    std::vector<double> means;
    std::vector<double> stds;  // population std; 1.0 substituted for constant channels
    std::vector<bool> constant_flags;
};

/// Per-channel z-score normalization with population (1/N) statistics over the
/// non-missing values. Constant channels get std replaced by 1 and a flag.
/// Missing values stay missing.
std::pair<MultivariateSeries, NormalizationStats> zscore(const MultivariateSeries& series);

/// Normalization against precomputed stats (e.g. train-split stats applied to test).
MultivariateSeries zscore_with(const MultivariateSeries& series, const NormalizationStats& stats);

/// Exact inverse of zscore: denormalize(zscore(x)) == x within 1e-10.
MultivariateSeries denormalize(const MultivariateSeries& series, const NormalizationStats& stats);

/// Denormalizes a forecast matrix whose columns are the given channel indices.
Matrix denormalize_columns(const Matrix& values, const NormalizationStats& stats,
                           const std::vector<std::size_t>& channel_indices);

}  // namespace tsagent
