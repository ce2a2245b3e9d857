#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tsagent/window.hpp"

namespace bench {

inline tsagent::Window noisy_seasonal_window(std::size_t length, std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.2);
    std::vector<std::vector<double>> rows;
    rows.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        rows.push_back({10.0 + 3.0 * std::sin(2.0 * M_PI * static_cast<double>(i) / 24.0) +
                        noise(rng)});
    tsagent::Window w;
    w.history = tsagent::Matrix::from_rows(rows);
    w.channel_names = {"y"};
    w.frequency_seconds = 3600;
    w.spec.lookback = length;
    w.spec.horizon = 24;
    w.spec.seasonal_period = 24;
    return w;
}

inline std::vector<double> noisy_series(std::size_t length, std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> out(length);
    double level = 0.0;
    for (auto& v : out) {
        level = 0.8 * level + noise(rng);
        v = level;
    }
    return out;
}

}  // namespace bench
