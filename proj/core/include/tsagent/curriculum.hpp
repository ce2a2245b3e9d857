#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsagent/external_model.hpp"
#include "tsagent/models.hpp"
#include "tsagent/window.hpp"

namespace tsagent::curriculum {

struct DifficultyProfile {
    std::string dataset_id;
    std::size_t origin_index = 0;
    double teacher_error = 0.0;  // nMSE of the reference teacher on the target
    double perm_entropy = 0.0;   // in [0,1], averaged over target channels
    int band = 0;                // 1..3 after banding
    bool scorable = true;
    std::string note;  // failure reason when unscorable
};

struct CurriculumConfig {
    std::size_t order = 3;  // permutation entropy pattern length m
    std::size_t delay = 1;  // permutation entropy delay tau
    std::size_t epochs_per_stage = 1;
    models::ForecastModelId teacher = models::ForecastModelId::seasonal_naive(24);
};

/// nMSE of the teacher's forecast against the window target (same
/// normalization as the accuracy reward).
double teacher_difficulty(const Window& window, const models::ForecastModelId& teacher,
                          const models::ExternalModelRegistry* externals = nullptr);

/// Scores one window: teacher error plus normalized permutation entropy of the
/// target-channel history. Teacher failures yield an unscorable profile.
DifficultyProfile score_window(const Window& window, const CurriculumConfig& config,
                               const std::string& dataset_id,
                               const models::ExternalModelRegistry* externals = nullptr);

struct BandThresholds {
    double teacher_error_low = 0.0;   // lower tercile of teacher error
    double teacher_error_high = 0.0;  // upper tercile (reported, not used by the rule)
    double entropy_high = 0.0;        // upper tercile of permutation entropy
};

BandThresholds default_thresholds(const std::vector<DifficultyProfile>& profiles);

/// Region rule over (teacher error e, entropy h):
///   band 1: e <= e_low and h <= h_high   (regular and easy)
///   band 2: e >  e_low and h <= h_high   (harder, still structurally regular)
///   band 3: h >  h_high                  (stochastic / noisy)
/// Unscorable profiles keep band 0 and are excluded. Returns true when the
/// scorable distribution is degenerate (all profiles identical -> all band 1).
bool assign_bands(std::vector<DifficultyProfile>& profiles,
                  std::optional<BandThresholds> thresholds = std::nullopt);

/// Staged sample order: band-1 profiles (seeded shuffle), then band-2, then
/// band-3. Each band block repeats epochs_per_stage times, reshuffled per
/// epoch. Returns indices into `profiles`; unscorable profiles are skipped;
/// empty bands are skipped.
std::vector<std::size_t> schedule_order(const std::vector<DifficultyProfile>& profiles,
                                        std::uint64_t seed,
                                        std::size_t epochs_per_stage = 1);

/// Training manifest, one JSON record per line:
/// {"dataset","origin_index","band","teacher_error","perm_entropy"}.
std::string manifest_lines(const std::vector<DifficultyProfile>& profiles,
                           const std::vector<std::size_t>& order);

}  // namespace tsagent::curriculum
