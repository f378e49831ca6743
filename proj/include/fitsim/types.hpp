#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fitsim {

// Two user stages; performance is evaluated additively (acquisition) or
// multiplicatively against the base level (retention). Fixed for a whole
// service period.
enum class SkillStage { Acquisition, Retention };

std::string to_string(SkillStage stage);
SkillStage stage_from_string(const std::string& name);

// Nine-parameter user type governing both the health dynamics and the
// utility terms of the reward.
struct UserProfile {
    double alpha = 0.9;   // fitness decay rate per epoch, in (0,1)
    double beta = 0.5;    // fatigue decay rate per epoch, in (0,1)
    double lambda = 0.8;  // fitness response exponent, in (0,1] (concave)
    double mu = 1.5;      // fatigue response exponent, >= 1 (convex)
    double delta = 0.8;   // base-level decay rate per epoch, in (0,1]
    double k_f = 0.4;     // marginal utility of fitness, > 0
    double k_g = 0.3;     // marginal disutility of fatigue, > 0
    double m = 2.0;       // goal-achievement bonus, >= 0
    double l = 3.0;       // goal-failure disutility scale, >= 0

    void validate() const;
};

// Per-epoch health state s_t. b, f, g are stocks carried across epochs;
// e is the realized intensity of the epoch that produced this state.
struct HealthState {
    double e = 0.0;  // realized exercise intensity, [0,1]
    double b = 0.0;  // base level of past exercise, >= 0
    double f = 0.0;  // fitness stock, >= 0
    double g = 0.0;  // fatigue stock, >= 0

    void validate() const;
};

// Goal intensity on the fixed one-decimal grid. Stored as integer tenths so
// grid membership is exact; 0 is reserved for the without-service baseline.
class GoalAction {
public:
    static constexpr int kLevels = 10;  // agent-selectable levels 0.1 .. 1.0

    enum class Group { NoService, Weak, SlightlyWeak, SlightlyStrong, Strong };

    GoalAction() = default;

    // Validates that `level` is an exact multiple of 0.1 in [0,1].
    static GoalAction from_level(double level);

    // idx in [0, kLevels) maps to levels 0.1 .. 1.0.
    static GoalAction from_index(int idx);

    static GoalAction no_service() { return GoalAction(); }

    double level() const { return tenths_ / 10.0; }
    // Index into the agent action grid; -1 for the no-service action.
    int index() const { return tenths_ - 1; }
    bool is_no_service() const { return tenths_ == 0; }
    Group group() const;

    bool operator==(const GoalAction& other) const { return tenths_ == other.tenths_; }

private:
    explicit GoalAction(int tenths) : tenths_(tenths) {}
    int tenths_ = 0;
};

std::string to_string(GoalAction::Group group);

}  // namespace fitsim
