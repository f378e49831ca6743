#pragma once

#include <cstdint>
#include <vector>

#include "fitsim/dynamics.hpp"
#include "fitsim/rng.hpp"
#include "fitsim/trend.hpp"
#include "fitsim/types.hpp"

namespace fitsim {

// Stochastic user response to a suggested goal. The service decides only the
// suggestion; rho controls how strongly behavior is pulled toward it and
// sigma the day-to-day noise. rho=0 recovers a user who ignores suggestions.
struct BehaviorModel {
    double baseline = 0.5;  // mean intrinsic intensity, (0,1]
    double sigma = 0.1;     // response noise standard deviation
    double rho = 0.3;       // goal-pull coefficient, [0,1]

    void validate() const;
};

// Everything that determines one episode, including its random stream.
struct EpisodeConfig {
    int horizon = 84;  // decision epochs (days); 84 = 12 weeks
    SkillStage stage = SkillStage::Acquisition;
    UserProfile profile;
    TrendSchedule trend = TrendSchedule::preset(EnvId::E1);
    BehaviorModel behavior;
    std::uint64_t seed = 0;

    void validate() const;
};

// One completed epoch as observed by a policy. The history starts with a
// synthetic record for the initial state (day_frac 0, action 0).
struct EpochRecord {
    double e = 0.0;
    double b = 0.0;
    double f = 0.0;
    double g = 0.0;
    double action_level = 0.0;  // goal issued in this epoch
    double day_frac = 0.0;      // completed epochs / horizon
};

// Goal-setting policy contract. Stateful policies reset per episode; the
// returned action must be on the 10-level grid (GoalAction enforces this).
class Policy {
public:
    virtual ~Policy() = default;
    virtual void reset() {}
    virtual GoalAction select_action(const std::vector<EpochRecord>& history) = 0;
};

struct StepResult {
    HealthState next;
    double e_t = 0.0;
    double r_t = 0.0;
};

// Realized intensity for one epoch. Draws exactly one Gaussian variate from
// `rng`. The intrinsic intent is baseline scaled by the trend and clipped to
// [0,1]; a nonzero goal pulls the mixture toward its level.
double sample_behavior(const EpisodeConfig& cfg, int day, const GoalAction& action, Rng& rng);

// One epoch of the decision process: user acts, state updates, reward accrues.
StepResult step(const HealthState& state, const GoalAction& action, const EpisodeConfig& cfg,
                int day, Rng& rng);

struct EpochStep {
    GoalAction action;
    HealthState state;  // state after the epoch
    double e = 0.0;
    double reward = 0.0;
};

struct RunTrace {
    std::vector<EpochStep> steps;
    double total_reward = 0.0;
};

// Full episode loop: initial state (e=0, b=baseline, f=0, g=0), then
// `horizon` epochs feeding observations back to the policy.
RunTrace rollout(Policy& policy, const EpisodeConfig& cfg);

// Stateful wrapper used by training loops that need stepwise control.
class Environment {
public:
    explicit Environment(EpisodeConfig cfg);

    void reset();                    // restart with the configured seed
    void reset(std::uint64_t seed);  // restart a new episode stream

    const EpisodeConfig& config() const { return cfg_; }
    const HealthState& state() const { return state_; }
    const std::vector<EpochRecord>& history() const { return history_; }
    int day() const { return day_; }
    bool done() const { return day_ >= cfg_.horizon; }

    StepResult step(const GoalAction& action);

private:
    EpisodeConfig cfg_;
    Rng rng_;
    HealthState state_;
    std::vector<EpochRecord> history_;
    int day_ = 0;
};

}  // namespace fitsim
