#pragma once

#include "fitsim/types.hpp"

namespace fitsim {

// Impulse-response state update:
//   f' = alpha*f + e^lambda
//   g' = beta*g  + e^mu
//   b' = delta*b + (1-delta)*e
// Pure function; throws std::domain_error on invalid inputs.
HealthState update_state(const HealthState& prev, double e_t, const UserProfile& profile);

// Exercise performance of a post-update state.
//   Acquisition: b + k_f*f - k_g*g
//   Retention:   b * (1 + k_f*f - k_g*g)
double performance(const HealthState& state, const UserProfile& profile, SkillStage stage);

// Goal-attainment utility: +m when e_t reaches the goal, -l times the
// relative shortfall otherwise, 0 for the no-service action.
double intervention_effect(double e_t, const GoalAction& action, const UserProfile& profile);

// Per-epoch reward: performance plus intervention effect. `state` must
// already be updated for the epoch the action was issued in.
double reward(const HealthState& state, const GoalAction& action, const UserProfile& profile,
              SkillStage stage);

}  // namespace fitsim
