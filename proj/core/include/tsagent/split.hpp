#pragma once

#include <array>

#include "tsagent/series.hpp"

namespace tsagent {

struct SplitRatios {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;
};

struct SplitResult {
    MultivariateSeries train;
    MultivariateSeries val;
    MultivariateSeries test;
    std::array<std::size_t, 3> lengths{};
};

/// Contiguous train/val/test split, in time order. Boundary indices come from
/// cumulative rounding so concatenating the parts reproduces the source exactly.
/// Ratios must be nonnegative and sum to 1 within 1e-9. Empty parts are
/// represented by default-constructed (zero-length) series.
SplitResult split(const MultivariateSeries& series, const SplitRatios& ratios);

}  // namespace tsagent
