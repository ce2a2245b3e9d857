#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "tsagent/series.hpp"
#include "tsagent/window.hpp"

namespace fixtures {

using tsagent::Matrix;
using tsagent::MultivariateSeries;
using tsagent::Window;
using tsagent::WindowSpec;

constexpr std::int64_t kHour = 3600;
// 2016-07-01 00:00:00 UTC, the usual ETT start.
constexpr std::int64_t kStartTs = 1467331200;

inline MultivariateSeries make_series(const std::vector<std::vector<double>>& rows,
                                      std::vector<std::string> names,
                                      std::int64_t freq = kHour) {
    std::vector<std::int64_t> ts(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        ts[i] = kStartTs + static_cast<std::int64_t>(i) * freq;
    return MultivariateSeries(std::move(ts), std::move(names), Matrix::from_rows(rows), freq);
}

inline MultivariateSeries univariate(const std::vector<double>& values,
                                     const std::string& name = "y") {
    std::vector<std::vector<double>> rows;
    rows.reserve(values.size());
    for (double v : values) rows.push_back({v});
    return make_series(rows, {name});
}

/// A window detached from any series: history only (plus optional target).
inline Window make_window(const std::vector<double>& history, std::size_t seasonal_period = 24,
                          std::size_t horizon = 24) {
    Window w;
    std::vector<std::vector<double>> rows;
    for (double v : history) rows.push_back({v});
    w.history = Matrix::from_rows(rows);
    w.channel_names = {"y"};
    w.frequency_seconds = kHour;
    w.start_timestamp = kStartTs;
    w.spec.lookback = history.size();
    w.spec.horizon = horizon;
    w.spec.seasonal_period = seasonal_period;
    return w;
}

inline std::vector<double> ramp(std::size_t n, double start = 0.0, double step = 1.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + step * static_cast<double>(i);
    return out;
}

inline std::vector<double> constant(std::size_t n, double value) {
    return std::vector<double>(n, value);
}

inline std::vector<double> sinusoid(std::size_t n, double period, double amplitude = 1.0,
                                    double phase = 0.0, double offset = 0.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = offset + amplitude * std::sin(2.0 * M_PI * static_cast<double>(i) / period + phase);
    return out;
}

inline std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0,
                                          double mean = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mean, sigma);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

inline std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

/// Mixed-regime fixture series: seasonal block, trending block, noisy block,
/// repeated. Windows sliding over it exercise every scripted-policy branch.
inline MultivariateSeries mixed_regime_series(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::vector<double>> rows;
    rows.reserve(length);
    double level = 10.0;
    for (std::size_t i = 0; i < length; ++i) {
        const std::size_t block = (i / 120) % 3;
        double v = level;
        if (block == 0) {
            v += 3.0 * std::sin(2.0 * M_PI * static_cast<double>(i) / 24.0);
        } else if (block == 1) {
            v += 0.15 * static_cast<double>(i % 120);
        } else {
            std::normal_distribution<double> rough(0.0, 2.0);
            v += rough(rng);
        }
        v += noise(rng);
        rows.push_back({v});
    }
    return make_series(rows, {"y"});
}

/// Strongly seasonal two-channel fixture used by batch and ablation tests.
inline MultivariateSeries seasonal_dataset(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<std::vector<double>> rows;
    rows.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        const double phase = 2.0 * M_PI * static_cast<double>(i) / 24.0;
        rows.push_back({20.0 + 5.0 * std::sin(phase) + noise(rng),
                        100.0 + 20.0 * std::cos(phase) + noise(rng)});
    }
    return make_series(rows, {"y", "load"});
}

/// Writes a synthetic CSV shaped like a public benchmark file: a `date`
/// column plus `channels` numeric columns at hourly cadence.
inline std::string write_benchmark_shaped_csv(const std::string& path, std::size_t rows,
                                              const std::vector<std::string>& channels,
                                              std::uint64_t seed) {
    std::ofstream out(path);
    out << "date";
    for (const auto& c : channels) out << "," << c;
    out << "\n";
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.3);
    for (std::size_t i = 0; i < rows; ++i) {
        out << tsagent::format_timestamp(kStartTs + static_cast<std::int64_t>(i) * kHour);
        for (std::size_t c = 0; c < channels.size(); ++c) {
            const double phase = 2.0 * M_PI * static_cast<double>(i) / 24.0;
            const double weekly = 2.0 * M_PI * static_cast<double>(i) / (24.0 * 7.0);
            const double v = 10.0 + 2.0 * static_cast<double>(c) +
                             4.0 * std::sin(phase + 0.3 * static_cast<double>(c)) +
                             1.5 * std::sin(weekly) + noise(rng);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", v);
            out << "," << buf;
        }
        out << "\n";
    }
    return path;
}

}  // namespace fixtures
