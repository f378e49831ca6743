#pragma once

#include <cstdint>
#include <vector>

#include "fitsim/data/csv.hpp"
#include "fitsim/data/series.hpp"
#include "fitsim/types.hpp"

namespace fitsim::data {

// Population statistics for synthetic daily walking volume (steps/day).
inline constexpr double kStepsMean = 6274.0;
inline constexpr double kStepsStddev = 2106.0;

struct SynthUser {
    ProfileRow profile;       // source = "random"
    IntensitySeries steps;    // one sample per day, unit = Steps
};

struct SynthOptions {
    int n_users = 50;
    int n_days = 84;
    std::string start_date = "2023-01-02";
};

// Synthetic walking cohort: daily steps drawn i.i.d. from
// Normal(kStepsMean, kStepsStddev^2) truncated at 0 (rejection sampling),
// and user profiles drawn uniformly within documented plausible ranges.
// Deterministic for a given seed.
std::vector<SynthUser> synth_walking_cohort(const SynthOptions& options, std::uint64_t seed);

// Uniform draw of a valid UserProfile within the documented plausible ranges
// (used for the synthetic cohort and for randomized test fixtures).
UserProfile random_profile(std::uint64_t seed);

}  // namespace fitsim::data
