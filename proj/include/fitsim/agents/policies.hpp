#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fitsim/environment.hpp"
#include "fitsim/nn/net.hpp"
#include "fitsim/rng.hpp"
#include "fitsim/types.hpp"

namespace fitsim::agents {

// Emits the same grid level every epoch, ignoring observations.
class FixedPolicy : public Policy {
public:
    explicit FixedPolicy(double level) : action_(GoalAction::from_level(level)) {
        if (action_.is_no_service()) throw std::domain_error("fixed policy level must be nonzero");
    }

    GoalAction select_action(const std::vector<EpochRecord>&) override { return action_; }

private:
    GoalAction action_;
};

// The without-service baseline: never issues a goal.
class NoServicePolicy : public Policy {
public:
    GoalAction select_action(const std::vector<EpochRecord>&) override {
        return GoalAction::no_service();
    }
};

// Builds the W x F observation window from an episode history: rows are the
// most recent W epoch records (zero-padded before day W-1), features per row
// are (e, b, f, g, action level, day/T). The slow stocks are rescaled by
// their stationary bounds 1/(1-alpha), 1/(1-beta) so every feature stays
// near [0,1] and the tanh trunk does not saturate.
std::vector<double> build_window(const std::vector<EpochRecord>& history, const nn::NetSpec& spec,
                                 const UserProfile& profile);

// Network-backed policy. Greedy (argmax) for evaluation; stochastic
// (softmax sampling) for training rollouts.
class NetPolicy : public Policy {
public:
    enum class Mode { Greedy, Sample };

    NetPolicy(const nn::PolicyValueNet& net, const nn::ParamVector& params, UserProfile profile,
              Mode mode = Mode::Greedy, std::uint64_t sample_seed = 0)
        : net_(&net), params_(&params), profile_(profile), mode_(mode), rng_(sample_seed) {}

    GoalAction select_action(const std::vector<EpochRecord>& history) override {
        const std::vector<double> window = build_window(history, net_->spec(), profile_);
        const nn::NetOutput out = net_->forward(*params_, window);
        if (mode_ == Mode::Greedy) return GoalAction::from_index(nn::argmax(out.logits));
        return GoalAction::from_index(nn::sample_categorical(nn::softmax(out.logits), rng_));
    }

private:
    const nn::PolicyValueNet* net_;
    const nn::ParamVector* params_;
    UserProfile profile_;
    Mode mode_;
    Rng rng_;
};

// Samples uniformly over the 10 goal levels; the untrained reference point
// for policy-improvement checks.
class UniformPolicy : public Policy {
public:
    explicit UniformPolicy(std::uint64_t seed) : rng_(seed) {}

    GoalAction select_action(const std::vector<EpochRecord>&) override {
        return GoalAction::from_index(rng_.uniform_int(GoalAction::kLevels));
    }

private:
    Rng rng_;
};

// Table 4 strategy names. "adaptive" is the trained agent; the fixed
// strategies use one representative level per intensity group; "none" is
// the without-service baseline.
const std::vector<std::string>& strategy_names();

// Builds a baseline policy by name ("weak", "slightly_weak", "slightly_strong",
// "strong", "none"). "adaptive" is rejected here: it needs trained parameters.
std::unique_ptr<Policy> make_baseline_policy(const std::string& name);

// Representative goal level of a named fixed strategy.
double strategy_level(const std::string& name);

}  // namespace fitsim::agents
