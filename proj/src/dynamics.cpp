#include "fitsim/dynamics.hpp"

#include <cmath>

namespace fitsim {

HealthState update_state(const HealthState& prev, double e_t, const UserProfile& profile) {
    prev.validate();
    profile.validate();
    if (!std::isfinite(e_t) || e_t < 0.0 || e_t > 1.0) {
        throw std::domain_error("e_t must be in [0,1]");
    }
    HealthState next;
    next.e = e_t;
    // std::pow(0, x>0) == 0, so zero effort is pure decay.
    next.f = profile.alpha * prev.f + std::pow(e_t, profile.lambda);
    next.g = profile.beta * prev.g + std::pow(e_t, profile.mu);
    next.b = profile.delta * prev.b + (1.0 - profile.delta) * e_t;
    return next;
}

double performance(const HealthState& state, const UserProfile& profile, SkillStage stage) {
    state.validate();
    profile.validate();
    const double net = profile.k_f * state.f - profile.k_g * state.g;
    if (stage == SkillStage::Acquisition) return state.b + net;
    return state.b * (1.0 + net);
}

double intervention_effect(double e_t, const GoalAction& action, const UserProfile& profile) {
    if (!std::isfinite(e_t) || e_t < 0.0 || e_t > 1.0) {
        throw std::domain_error("e_t must be in [0,1]");
    }
    if (action.is_no_service()) return 0.0;
    if (e_t >= action.level()) return profile.m;
    return -profile.l * (action.level() - e_t) / action.level();
}

double reward(const HealthState& state, const GoalAction& action, const UserProfile& profile,
              SkillStage stage) {
    return performance(state, profile, stage) + intervention_effect(state.e, action, profile);
}

}  // namespace fitsim
