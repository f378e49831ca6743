#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fitsim {

enum class EnvId { E1, E2, E3, E4, Custom };

std::string to_string(EnvId id);
EnvId env_from_string(const std::string& name);

// Piecewise-constant multiplier applied to the user's intrinsic intensity.
// Breakpoints are (start_day, multiplier) pairs sorted by start day, the
// first at day 0. Presets follow the four behavior-change regimes: stable,
// +40% after week 6, two-fold after week 6, -20% then +60% after week 6.
struct TrendSchedule {
    EnvId id = EnvId::E1;
    std::vector<std::pair<int, double>> breakpoints{{0, 1.0}};

    static TrendSchedule preset(EnvId id);
    static TrendSchedule custom(std::vector<std::pair<int, double>> breakpoints);

    // Multiplier of the last breakpoint with start_day <= day. Negative day
    // is a domain error.
    double multiplier(int day) const;

    void validate() const;
};

}  // namespace fitsim
