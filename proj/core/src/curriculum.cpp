#include "tsagent/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tsagent/errors.hpp"
#include "tsagent/reward.hpp"
#include "tsagent/stats.hpp"

namespace tsagent::curriculum {

namespace {
constexpr double kDegenerateTol = 1e-12;
}

double teacher_difficulty(const Window& window, const models::ForecastModelId& teacher,
                          const models::ExternalModelRegistry* externals) {
    if (!window.target) throw DataError("teacher_difficulty: window has no ground truth");
    const auto forecast =
        models::predict_time_series(teacher, window, window.horizon(), externals);
    return reward::nmse(forecast.values, *window.target);
}

DifficultyProfile score_window(const Window& window, const CurriculumConfig& config,
                               const std::string& dataset_id,
                               const models::ExternalModelRegistry* externals) {
    DifficultyProfile p;
    p.dataset_id = dataset_id;
    p.origin_index = window.origin_index;
    try {
        p.teacher_error = teacher_difficulty(window, config.teacher, externals);
        const Matrix hist = window.target_history();
        double acc = 0.0;
        for (std::size_t c = 0; c < hist.cols(); ++c) {
            const auto values = stats::drop_missing(hist.column(c));
            acc += stats::permutation_entropy(values, config.order, config.delay);
        }
        p.perm_entropy = acc / static_cast<double>(hist.cols());
    } catch (const std::exception& e) {
        p.scorable = false;
        p.note = e.what();
    }
    return p;
}

BandThresholds default_thresholds(const std::vector<DifficultyProfile>& profiles) {
    std::vector<double> errors, entropies;
    for (const auto& p : profiles) {
        if (!p.scorable) continue;
        errors.push_back(p.teacher_error);
        entropies.push_back(p.perm_entropy);
    }
    if (errors.size() < 3)
        throw DataError("curriculum: banding needs at least 3 scorable profiles");
    BandThresholds t;
    t.teacher_error_low = stats::percentile(errors, 100.0 / 3.0);
    t.teacher_error_high = stats::percentile(errors, 200.0 / 3.0);
    t.entropy_high = stats::percentile(entropies, 200.0 / 3.0);
    return t;
}

bool assign_bands(std::vector<DifficultyProfile>& profiles,
                  std::optional<BandThresholds> thresholds) {
    const BandThresholds t = thresholds ? *thresholds : default_thresholds(profiles);

    bool any = false;
    double e_min = 0, e_max = 0, h_min = 0, h_max = 0;
    for (auto& p : profiles) {
        if (!p.scorable) {
            p.band = 0;
            continue;
        }
        if (!any) {
            e_min = e_max = p.teacher_error;
            h_min = h_max = p.perm_entropy;
            any = true;
        } else {
            e_min = std::min(e_min, p.teacher_error);
            e_max = std::max(e_max, p.teacher_error);
            h_min = std::min(h_min, p.perm_entropy);
            h_max = std::max(h_max, p.perm_entropy);
        }
        if (p.perm_entropy > t.entropy_high)
            p.band = 3;
        else if (p.teacher_error > t.teacher_error_low)
            p.band = 2;
        else
            p.band = 1;
    }
    return any && (e_max - e_min) < kDegenerateTol && (h_max - h_min) < kDegenerateTol;
}

std::vector<std::size_t> schedule_order(const std::vector<DifficultyProfile>& profiles,
                                        std::uint64_t seed, std::size_t epochs_per_stage) {
    if (epochs_per_stage == 0) throw ConfigError("schedule: epochs_per_stage must be >= 1");
    std::vector<std::size_t> order;
    std::mt19937_64 rng(seed);
    for (int band = 1; band <= 3; ++band) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            if (profiles[i].scorable && profiles[i].band == band) members.push_back(i);
        for (std::size_t epoch = 0; epoch < epochs_per_stage; ++epoch) {
            // Hand-rolled Fisher-Yates: identical outputs on every platform.
            for (std::size_t i = members.size(); i > 1; --i) {
                const std::size_t j = static_cast<std::size_t>(rng() % i);
                std::swap(members[i - 1], members[j]);
            }
            order.insert(order.end(), members.begin(), members.end());
        }
    }
    return order;
}

std::string manifest_lines(const std::vector<DifficultyProfile>& profiles,
                           const std::vector<std::size_t>& order) {
    std::string out;
    for (std::size_t idx : order) {
        const auto& p = profiles[idx];
        nlohmann::ordered_json j;
        j["dataset"] = p.dataset_id;
        j["origin_index"] = p.origin_index;
        j["band"] = p.band;
        j["teacher_error"] = p.teacher_error;
        j["perm_entropy"] = p.perm_entropy;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace tsagent::curriculum
