#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsagent::stats {

/// Values with NaN removed, original order kept.
std::vector<double> drop_missing(const std::vector<double>& xs);

double mean(const std::vector<double>& xs);
/// Population (1/N) variance.
double population_variance(const std::vector<double>& xs);
double population_std(const std::vector<double>& xs);
double median(std::vector<double> xs);
/// Median absolute deviation from the median.
double mad(const std::vector<double>& xs);
double min_value(const std::vector<double>& xs);
double max_value(const std::vector<double>& xs);

/// Population skewness m3 / m2^1.5; nullopt when variance is ~0.
std::optional<double> skewness(const std::vector<double>& xs);
/// Population excess kurtosis m4 / m2^2 - 3; nullopt when variance is ~0.
std::optional<double> excess_kurtosis(const std::vector<double>& xs);

/// Percentile in [0,100] by linear interpolation between closest ranks.
double percentile(std::vector<double> xs, double p);

/// Pearson correlation; nullopt when either side has ~0 variance.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);

/// OLS slope of y against index 0..n-1.
double ols_slope(const std::vector<double>& ys);

/// Autocorrelation at the given lag (biased estimator, full-series mean).
/// Zero-variance series yields 0.
double autocorrelation(const std::vector<double>& xs, std::size_t lag);

/// Ljung-Box Q statistic over lags 1..max_lag.
double ljung_box(const std::vector<double>& xs, std::size_t max_lag);

struct SpectralPeak {
    std::size_t bin = 0;        // DFT bin index (1-based, zero frequency excluded)
    double period_steps = 0.0;  // n / bin
    double magnitude = 0.0;
};

/// Top-k nonzero-frequency DFT bins of the mean-removed series, by magnitude.
/// Plain O(n^2) DFT over bins 1..n/2.
std::vector<SpectralPeak> dft_top_bins(const std::vector<double>& xs, std::size_t k);

/// Normalized permutation entropy of ordinal patterns over length-m delay
/// vectors. Ties broken by earlier index taking the smaller rank, so constant
/// and monotone series score exactly 0. Result lies in [0,1].
double permutation_entropy(const std::vector<double>& xs, std::size_t order = 3,
                           std::size_t delay = 1);

/// FNV-1a 64-bit hash, used for stable prompt/config digests.
std::uint64_t fnv1a64(const std::string& s);
std::string fnv1a64_hex(const std::string& s);

}  // namespace tsagent::stats
