#include "fitsim/types.hpp"

#include <cmath>

namespace fitsim {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::domain_error(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string to_string(SkillStage stage) {
    return stage == SkillStage::Acquisition ? "acquisition" : "retention";
}

SkillStage stage_from_string(const std::string& name) {
    if (name == "acquisition") return SkillStage::Acquisition;
    if (name == "retention") return SkillStage::Retention;
    throw std::domain_error("unknown skill stage: " + name);
}

void UserProfile::validate() const {
    require(finite(alpha) && alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");
    require(finite(beta) && beta > 0.0 && beta < 1.0, "beta must be in (0,1)");
    require(finite(lambda) && lambda > 0.0 && lambda <= 1.0, "lambda must be in (0,1]");
    require(finite(mu) && mu >= 1.0, "mu must be >= 1");
    require(finite(delta) && delta > 0.0 && delta <= 1.0, "delta must be in (0,1]");
    require(finite(k_f) && k_f > 0.0, "k_f must be > 0");
    require(finite(k_g) && k_g > 0.0, "k_g must be > 0");
    require(finite(m) && m >= 0.0, "m must be >= 0");
    require(finite(l) && l >= 0.0, "l must be >= 0");
}

void HealthState::validate() const {
    require(finite(e) && e >= 0.0 && e <= 1.0, "e must be in [0,1]");
    require(finite(b) && b >= 0.0, "b must be >= 0");
    require(finite(f) && f >= 0.0, "f must be >= 0");
    require(finite(g) && g >= 0.0, "g must be >= 0");
}

GoalAction GoalAction::from_level(double level) {
    if (!std::isfinite(level)) throw std::domain_error("goal level must be finite");
    const double scaled = level * 10.0;
    const int tenths = static_cast<int>(std::lround(scaled));
    if (tenths < 0 || tenths > 10 || std::fabs(scaled - tenths) > 1e-9) {
        throw std::domain_error("goal level must be a multiple of 0.1 in [0,1]");
    }
    return GoalAction(tenths);
}

GoalAction GoalAction::from_index(int idx) {
    if (idx < 0 || idx >= kLevels) throw std::domain_error("action index out of range");
    return GoalAction(idx + 1);
}

GoalAction::Group GoalAction::group() const {
    if (tenths_ == 0) return Group::NoService;
    if (tenths_ <= 2) return Group::Weak;
    if (tenths_ <= 5) return Group::SlightlyWeak;
    if (tenths_ <= 8) return Group::SlightlyStrong;
    return Group::Strong;
}

std::string to_string(GoalAction::Group group) {
    switch (group) {
        case GoalAction::Group::NoService: return "no_service";
        case GoalAction::Group::Weak: return "weak";
        case GoalAction::Group::SlightlyWeak: return "slightly_weak";
        case GoalAction::Group::SlightlyStrong: return "slightly_strong";
        case GoalAction::Group::Strong: return "strong";
    }
    return "unknown";
}

}  // namespace fitsim
