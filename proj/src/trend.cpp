#include "fitsim/trend.hpp"

#include <stdexcept>

namespace fitsim {

namespace {
constexpr int kWeek6 = 42;  // 6 weeks * 7 days, change effective at start of day 42 (0-indexed)
}

std::string to_string(EnvId id) {
    switch (id) {
        case EnvId::E1: return "E1";
        case EnvId::E2: return "E2";
        case EnvId::E3: return "E3";
        case EnvId::E4: return "E4";
        case EnvId::Custom: return "custom";
    }
    return "unknown";
}

EnvId env_from_string(const std::string& name) {
    if (name == "E1") return EnvId::E1;
    if (name == "E2") return EnvId::E2;
    if (name == "E3") return EnvId::E3;
    if (name == "E4") return EnvId::E4;
    throw std::domain_error("unknown environment id: " + name);
}

TrendSchedule TrendSchedule::preset(EnvId id) {
    TrendSchedule s;
    s.id = id;
    switch (id) {
        case EnvId::E1: s.breakpoints = {{0, 1.0}}; break;
        case EnvId::E2: s.breakpoints = {{0, 1.0}, {kWeek6, 1.4}}; break;
        case EnvId::E3: s.breakpoints = {{0, 1.0}, {kWeek6, 2.0}}; break;
        case EnvId::E4: s.breakpoints = {{0, 0.8}, {kWeek6, 1.6}}; break;
        case EnvId::Custom: throw std::domain_error("custom schedules need explicit breakpoints");
    }
    return s;
}

TrendSchedule TrendSchedule::custom(std::vector<std::pair<int, double>> breakpoints) {
    TrendSchedule s;
    s.id = EnvId::Custom;
    s.breakpoints = std::move(breakpoints);
    s.validate();
    return s;
}

double TrendSchedule::multiplier(int day) const {
    if (day < 0) throw std::domain_error("day must be >= 0");
    double factor = breakpoints.front().second;
    for (const auto& [start, mult] : breakpoints) {
        if (start <= day) factor = mult;
    }
    return factor;
}

void TrendSchedule::validate() const {
    if (breakpoints.empty() || breakpoints.front().first != 0) {
        throw std::domain_error("trend schedule must start at day 0");
    }
    int prev = -1;
    for (const auto& [start, mult] : breakpoints) {
        if (start <= prev && prev >= 0) throw std::domain_error("breakpoints must be sorted by start day");
        if (mult <= 0.0) throw std::domain_error("trend multipliers must be > 0");
        prev = start;
    }
}

}  // namespace fitsim
