#include "fitsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fitsim {

namespace {

double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

HealthState initial_state(const EpisodeConfig& cfg) {
    HealthState s;
    s.e = 0.0;
    s.b = cfg.behavior.baseline;
    s.f = 0.0;
    s.g = 0.0;
    return s;
}

EpochRecord initial_record(const EpisodeConfig& cfg) {
    EpochRecord rec;
    rec.b = cfg.behavior.baseline;
    return rec;
}

}  // namespace

void BehaviorModel::validate() const {
    if (!(std::isfinite(baseline) && baseline > 0.0 && baseline <= 1.0)) {
        throw std::domain_error("baseline must be in (0,1]");
    }
    if (!(std::isfinite(sigma) && sigma >= 0.0)) throw std::domain_error("sigma must be >= 0");
    if (!(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0)) {
        throw std::domain_error("rho must be in [0,1]");
    }
}

void EpisodeConfig::validate() const {
    if (horizon < 1) throw std::domain_error("horizon must be >= 1");
    profile.validate();
    trend.validate();
    behavior.validate();
}

double sample_behavior(const EpisodeConfig& cfg, int day, const GoalAction& action, Rng& rng) {
    if (day < 0 || day >= cfg.horizon) throw std::domain_error("day out of range");
    const double intent = clip01(cfg.trend.multiplier(day) * cfg.behavior.baseline);
    const double noise = cfg.behavior.sigma * rng.gaussian();
    if (action.is_no_service()) return clip01(intent + noise);
    return clip01((1.0 - cfg.behavior.rho) * intent + cfg.behavior.rho * action.level() + noise);
}

StepResult step(const HealthState& state, const GoalAction& action, const EpisodeConfig& cfg,
                int day, Rng& rng) {
    StepResult res;
    res.e_t = sample_behavior(cfg, day, action, rng);
    res.next = update_state(state, res.e_t, cfg.profile);
    res.r_t = reward(res.next, action, cfg.profile, cfg.stage);
    return res;
}

RunTrace rollout(Policy& policy, const EpisodeConfig& cfg) {
    cfg.validate();
    Environment env(cfg);
    policy.reset();
    RunTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(cfg.horizon));
    while (!env.done()) {
        const GoalAction action = policy.select_action(env.history());
        const StepResult res = env.step(action);
        trace.steps.push_back({action, res.next, res.e_t, res.r_t});
        trace.total_reward += res.r_t;
    }
    return trace;
}

Environment::Environment(EpisodeConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    cfg_.validate();
    reset();
}

void Environment::reset() { reset(cfg_.seed); }

void Environment::reset(std::uint64_t seed) {
    cfg_.seed = seed;
    rng_ = Rng(seed);
    state_ = initial_state(cfg_);
    history_.clear();
    history_.push_back(initial_record(cfg_));
    day_ = 0;
}

StepResult Environment::step(const GoalAction& action) {
    if (done()) throw std::logic_error("episode already finished");
    const StepResult res = fitsim::step(state_, action, cfg_, day_, rng_);
    state_ = res.next;
    ++day_;
    history_.push_back({state_.e, state_.b, state_.f, state_.g, action.level(),
                        static_cast<double>(day_) / cfg_.horizon});
    return res;
}

}  // namespace fitsim
