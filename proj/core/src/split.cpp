#include "tsagent/split.hpp"

#include <cmath>

#include "tsagent/errors.hpp"

namespace tsagent {

namespace {

MultivariateSeries take(const MultivariateSeries& s, std::size_t first, std::size_t count) {
    if (count == 0) return MultivariateSeries();
    std::vector<std::int64_t> ts(s.timestamps().begin() + static_cast<std::ptrdiff_t>(first),
                                 s.timestamps().begin() + static_cast<std::ptrdiff_t>(first + count));
    return MultivariateSeries(std::move(ts), s.channel_names(),
                              s.values().slice_rows(first, count), s.frequency_seconds());
}

}  // namespace

SplitResult split(const MultivariateSeries& series, const SplitRatios& ratios) {
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0)
        throw ConfigError("split: ratios must be nonnegative");
    const double sum = ratios.train + ratios.val + ratios.test;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw ConfigError("split: ratios sum to " + std::to_string(sum) + ", expected 1");

    const auto total = static_cast<double>(series.length());
    const auto n1 = static_cast<std::size_t>(std::floor(total * ratios.train + 0.5));
    const auto n12 =
        static_cast<std::size_t>(std::floor(total * (ratios.train + ratios.val) + 0.5));
    const std::size_t n_train = n1;
    const std::size_t n_val = n12 - n1;
    const std::size_t n_test = series.length() - n12;

    SplitResult out;
    out.train = take(series, 0, n_train);
    out.val = take(series, n_train, n_val);
    out.test = take(series, n_train + n_val, n_test);
    out.lengths = {n_train, n_val, n_test};
    return out;
}

}  // namespace tsagent
