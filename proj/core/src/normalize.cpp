#include "tsagent/normalize.hpp"

#include <stdexcept>

#include "tsagent/stats.hpp"

namespace tsagent {

namespace {
constexpr double kStdTol = 1e-12;

NormalizationStats compute_stats(const MultivariateSeries& series) {
    NormalizationStats st;
    const auto& m = series.values();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto col = stats::drop_missing(m.column(c));
        const double mu = col.empty() ? 0.0 : stats::mean(col);
        double sd = col.empty() ? 0.0 : stats::population_std(col);
        const bool constant = sd < kStdTol;
        if (constant) sd = 1.0;
        st.means.push_back(mu);
        st.stds.push_back(sd);
        st.constant_flags.push_back(constant);
    }
    return st;
}

MultivariateSeries apply(const MultivariateSeries& series, const NormalizationStats& st,
                         bool forward) {
    if (st.means.size() != series.channel_count())
        throw std::invalid_argument("normalize: stats channel count mismatch");
    Matrix out = series.values();
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c) {
            const double v = out(r, c);
            if (is_missing(v)) continue;
            out(r, c) = forward ? (v - st.means[c]) / st.stds[c] : v * st.stds[c] + st.means[c];
        }
    return MultivariateSeries(series.timestamps(), series.channel_names(), std::move(out),
                              series.frequency_seconds());
}

}  // namespace

std::pair<MultivariateSeries, NormalizationStats> zscore(const MultivariateSeries& series) {
    NormalizationStats st = compute_stats(series);
    return {apply(series, st, true), std::move(st)};
}

MultivariateSeries zscore_with(const MultivariateSeries& series, const NormalizationStats& stats) {
    return apply(series, stats, true);
}

MultivariateSeries denormalize(const MultivariateSeries& series, const NormalizationStats& stats) {
    return apply(series, stats, false);
}

Matrix denormalize_columns(const Matrix& values, const NormalizationStats& stats,
                           const std::vector<std::size_t>& channel_indices) {
    if (values.cols() != channel_indices.size())
        throw std::invalid_argument("denormalize_columns: column count mismatch");
    Matrix out = values;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const std::size_t c = channel_indices[j];
            if (c >= stats.means.size())
                throw std::invalid_argument("denormalize_columns: channel index out of range");
            if (!is_missing(out(r, j))) out(r, j) = out(r, j) * stats.stds[c] + stats.means[c];
        }
    return out;
}

}  // namespace tsagent
