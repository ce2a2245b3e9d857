#include "tsagent/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "tsagent/matrix.hpp"

namespace tsagent::stats {

namespace {
constexpr double kVarTol = 1e-15;
}

std::vector<double> drop_missing(const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double v : xs)
        if (!is_missing(v)) out.push_back(v);
    return out;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return missing_value();
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_variance(const std::vector<double>& xs) {
    if (xs.empty()) return missing_value();
    const double m = mean(xs);
    double acc = 0.0;
    for (double v : xs) acc += (v - m) * (v - m);
    return acc / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs) {
    const double v = population_variance(xs);
    return is_missing(v) ? v : std::sqrt(v);
}

double median(std::vector<double> xs) {
    if (xs.empty()) return missing_value();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mad(const std::vector<double>& xs) {
    if (xs.empty()) return missing_value();
    const double med = median(xs);
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = std::fabs(xs[i] - med);
    return median(std::move(dev));
}

double min_value(const std::vector<double>& xs) {
    if (xs.empty()) return missing_value();
    return *std::min_element(xs.begin(), xs.end());
}

double max_value(const std::vector<double>& xs) {
    if (xs.empty()) return missing_value();
    return *std::max_element(xs.begin(), xs.end());
}

std::optional<double> skewness(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::nullopt;
    const double m = mean(xs);
    double m2 = 0.0, m3 = 0.0;
    for (double v : xs) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(xs.size());
    m3 /= static_cast<double>(xs.size());
    if (m2 < kVarTol) return std::nullopt;
    return m3 / std::pow(m2, 1.5);
}

std::optional<double> excess_kurtosis(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::nullopt;
    const double m = mean(xs);
    double m2 = 0.0, m4 = 0.0;
    for (double v : xs) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(xs.size());
    m4 /= static_cast<double>(xs.size());
    if (m2 < kVarTol) return std::nullopt;
    return m4 / (m2 * m2) - 3.0;
}

double percentile(std::vector<double> xs, double p) {
    if (xs.empty()) return missing_value();
    if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: p outside [0,100]");
    std::sort(xs.begin(), xs.end());
    const double rank = (static_cast<double>(xs.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= xs.size()) return xs.back();
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) return std::nullopt;
    const double ma = mean(a), mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa < kVarTol || sbb < kVarTol) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

double ols_slope(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    if (n < 2) return 0.0;
    const double xbar = (static_cast<double>(n) - 1.0) / 2.0;
    const double ybar = mean(ys);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        num += dx * (ys[i] - ybar);
        den += dx * dx;
    }
    return num / den;
}

double autocorrelation(const std::vector<double>& xs, std::size_t lag) {
    const std::size_t n = xs.size();
    if (lag >= n) return 0.0;
    const double m = mean(xs);
    double den = 0.0;
    for (double v : xs) den += (v - m) * (v - m);
    if (den < kVarTol) return 0.0;
    double num = 0.0;
    for (std::size_t t = lag; t < n; ++t) num += (xs[t] - m) * (xs[t - lag] - m);
    return num / den;
}

double ljung_box(const std::vector<double>& xs, std::size_t max_lag) {
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2 || max_lag == 0) return 0.0;
    double q = 0.0;
    for (std::size_t k = 1; k <= max_lag && k < xs.size(); ++k) {
        const double rho = autocorrelation(xs, k);
        q += rho * rho / (n - static_cast<double>(k));
    }
    return n * (n + 2.0) * q;
}

std::vector<SpectralPeak> dft_top_bins(const std::vector<double>& xs, std::size_t k) {
    const std::size_t n = xs.size();
    std::vector<SpectralPeak> peaks;
    if (n < 4) return peaks;
    const double m = mean(xs);
    const std::size_t half = n / 2;
    peaks.reserve(half);
    for (std::size_t bin = 1; bin <= half; ++bin) {
        double re = 0.0, im = 0.0;
        const double w = 2.0 * M_PI * static_cast<double>(bin) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t) {
            const double centered = xs[t] - m;
            re += centered * std::cos(w * static_cast<double>(t));
            im -= centered * std::sin(w * static_cast<double>(t));
        }
        SpectralPeak p;
        p.bin = bin;
        p.period_steps = static_cast<double>(n) / static_cast<double>(bin);
        p.magnitude = std::sqrt(re * re + im * im);
        peaks.push_back(p);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
        return a.magnitude > b.magnitude;
    });
    if (peaks.size() > k) peaks.resize(k);
    return peaks;
}

double permutation_entropy(const std::vector<double>& xs, std::size_t order, std::size_t delay) {
    if (order < 2) throw std::invalid_argument("permutation_entropy: order must be >= 2");
    if (delay < 1) throw std::invalid_argument("permutation_entropy: delay must be >= 1");
    const std::size_t span = (order - 1) * delay;
    if (xs.size() < span + 1)
        throw std::invalid_argument("permutation_entropy: series shorter than (m-1)*tau + 1");

    const std::size_t n_patterns = xs.size() - span;
    std::unordered_map<std::uint64_t, std::size_t> counts;
    std::vector<std::size_t> perm(order);
    for (std::size_t start = 0; start < n_patterns; ++start) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        // Stable sort by value: equal values keep index order, i.e. the
        // earlier index receives the smaller rank.
        std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            return xs[start + a * delay] < xs[start + b * delay];
        });
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < order; ++j) code = code * order + perm[j];
        ++counts[code];
    }

    double h = 0.0;
    for (const auto& [code, c] : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(n_patterns);
        h -= p * std::log(p);
    }
    double log_m_factorial = 0.0;
    for (std::size_t i = 2; i <= order; ++i) log_m_factorial += std::log(static_cast<double>(i));
    return h / log_m_factorial;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return std::string(buf);
}

}  // namespace tsagent::stats
