#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "fitsim/agents/a3c.hpp"
#include "fitsim/agents/dqn.hpp"
#include "fitsim/agents/evaluate.hpp"
#include "fitsim/agents/policies.hpp"
#include "fitsim/environment.hpp"

using namespace fitsim;
using namespace fitsim::agents;

namespace {

// Deterministic one-epoch task: sigma 0 and rho 1 make the realized
// intensity equal the issued goal, so the optimum is a simple argmax.
EpisodeConfig bandit_config() {
    EpisodeConfig cfg;
    cfg.horizon = 1;
    cfg.stage = SkillStage::Acquisition;
    cfg.behavior.sigma = 0.0;
    cfg.behavior.rho = 1.0;
    return cfg;
}

int bandit_oracle(const EpisodeConfig& cfg, double* best_reward) {
    int best = -1;
    double best_r = -1e300;
    for (int idx = 0; idx < GoalAction::kLevels; ++idx) {
        FixedPolicy pol(GoalAction::from_index(idx).level());
        const RunTrace trace = rollout(pol, cfg);
        if (trace.total_reward > best_r) {
            best_r = trace.total_reward;
            best = idx;
        }
    }
    if (best_reward) *best_reward = best_r;
    return best;
}

struct SequencePolicy : Policy {
    std::vector<int> seq;
    std::size_t i = 0;
    void reset() override { i = 0; }
    GoalAction select_action(const std::vector<EpochRecord>&) override {
        return GoalAction::from_index(seq[i++]);
    }
};

// Exhaustive optimum over all 10^horizon action sequences of a noiseless
// episode. Only tractable for tiny horizons.
double planning_optimum(const EpisodeConfig& cfg) {
    SequencePolicy pol;
    pol.seq.assign(static_cast<std::size_t>(cfg.horizon), 0);
    long long total = 1;
    for (int t = 0; t < cfg.horizon; ++t) total *= GoalAction::kLevels;
    double best = -1e300;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int t = 0; t < cfg.horizon; ++t) {
            pol.seq[static_cast<std::size_t>(t)] = static_cast<int>(c % GoalAction::kLevels);
            c /= GoalAction::kLevels;
        }
        pol.reset();
        best = std::max(best, rollout(pol, cfg).total_reward);
    }
    return best;
}

double greedy_total(const nn::NetSpec& spec, const nn::ParamVector& params,
                    const EpisodeConfig& cfg) {
    nn::PolicyValueNet net(spec);
    NetPolicy pol(net, params, cfg.profile, NetPolicy::Mode::Greedy);
    return rollout(pol, cfg).total_reward;
}

TrainConfig bandit_train_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.total_steps = 5000;
    cfg.t_max = 5;
    cfg.lr = 7e-4;
    cfg.entropy_coef = 1e-3;
    cfg.reward_scale = 1.0;
    cfg.eval_every = 1000;
    cfg.eval_episodes = 3;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("train config validation rejects bad hyperparameters") {
    TrainConfig ok;
    CHECK_NOTHROW(ok.validate());

    auto broken = [](auto mutate) {
        TrainConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), std::domain_error);
    };
    broken([](TrainConfig& c) { c.workers = 0; });
    broken([](TrainConfig& c) { c.t_max = 0; });
    broken([](TrainConfig& c) { c.total_steps = c.t_max - 1; });
    broken([](TrainConfig& c) { c.gamma = 0.0; });
    broken([](TrainConfig& c) { c.gamma = 1.5; });
    broken([](TrainConfig& c) { c.lr = 0.0; });
    broken([](TrainConfig& c) { c.entropy_coef = -0.1; });
    broken([](TrainConfig& c) { c.value_coef = -1.0; });
    broken([](TrainConfig& c) { c.entropy_final = c.entropy_coef + 0.1; });
    broken([](TrainConfig& c) { c.reward_scale = 0.0; });
    broken([](TrainConfig& c) { c.eval_every = 0; });
    broken([](TrainConfig& c) { c.eval_episodes = 0; });
}

TEST_CASE("dqn config validation rejects bad hyperparameters") {
    DqnConfig ok;
    CHECK_NOTHROW(ok.validate());

    auto broken = [](auto mutate) {
        DqnConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), std::domain_error);
    };
    broken([](DqnConfig& c) { c.total_steps = 0; });
    broken([](DqnConfig& c) { c.gamma = 0.0; });
    broken([](DqnConfig& c) { c.lr = -1.0; });
    broken([](DqnConfig& c) { c.batch_size = 0; });
    broken([](DqnConfig& c) { c.replay_capacity = 8; });  // < batch_size
    broken([](DqnConfig& c) { c.target_sync = 0; });
    broken([](DqnConfig& c) { c.train_interval = 0; });
    broken([](DqnConfig& c) { c.eps_start = 1.2; });
    broken([](DqnConfig& c) { c.eps_end = c.eps_start + 0.1; });
    broken([](DqnConfig& c) { c.eps_end = -0.1; });
    broken([](DqnConfig& c) { c.reward_scale = 0.0; });
    broken([](DqnConfig& c) { c.eval_every = 0; });
}

TEST_CASE("fixed and no-service baseline policies") {
    FixedPolicy fixed(0.3);
    NoServicePolicy none;
    std::vector<EpochRecord> history(1);

    CHECK(fixed.select_action(history).level() == doctest::Approx(0.3));
    CHECK_FALSE(fixed.select_action(history).is_no_service());
    CHECK(none.select_action(history).is_no_service());
    CHECK(none.select_action(history).level() == 0.0);

    CHECK_THROWS(FixedPolicy(0.35));  // off the 0.1 grid
    CHECK_THROWS(FixedPolicy(0.0));   // reserved for no-service
    CHECK_THROWS(FixedPolicy(1.1));
}

TEST_CASE("strategy catalogue maps names to levels") {
    const auto& names = strategy_names();
    REQUIRE(names.size() == 6);
    CHECK(names[0] == "adaptive");
    CHECK(names.back() == "none");

    CHECK(strategy_level("weak") == doctest::Approx(0.2));
    CHECK(strategy_level("slightly_weak") == doctest::Approx(0.4));
    CHECK(strategy_level("slightly_strong") == doctest::Approx(0.7));
    CHECK(strategy_level("strong") == doctest::Approx(1.0));

    std::vector<EpochRecord> history(1);
    for (const std::string& name : {std::string("weak"), std::string("strong")}) {
        auto policy = make_baseline_policy(name);
        CHECK(policy->select_action(history).level() == doctest::Approx(strategy_level(name)));
    }
    CHECK(make_baseline_policy("none")->select_action(history).is_no_service());
    CHECK_THROWS(make_baseline_policy("adaptive"));  // needs trained parameters
    CHECK_THROWS(make_baseline_policy("mystery"));
}

TEST_CASE("uniform policy covers all levels roughly evenly") {
    UniformPolicy policy(17);
    std::vector<EpochRecord> history(1);
    std::vector<int> counts(GoalAction::kLevels, 0);
    const int n = 20000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(policy.select_action(history).index())];
    for (int c : counts) {
        CHECK(c > n / GoalAction::kLevels * 0.85);
        CHECK(c < n / GoalAction::kLevels * 1.15);
    }
}

TEST_CASE("observation window has the documented shape and padding") {
    const nn::NetSpec spec = nn::NetSpec::hybrid();
    UserProfile profile;

    std::vector<EpochRecord> history(1);  // initial record only
    history[0].b = 0.5;
    const auto w = build_window(history, spec, profile);
    REQUIRE(w.size() == spec.input_size());
    // Zero padding in all rows before the single real record.
    for (std::size_t i = 0; i + spec.features < w.size(); ++i) CHECK(w[i] == 0.0);
    // Last row carries the initial record; feature 1 is b.
    CHECK(w[w.size() - spec.features + 1] == doctest::Approx(0.5));

    // A long history keeps only the most recent W rows.
    std::vector<EpochRecord> longer(20);
    for (std::size_t i = 0; i < longer.size(); ++i) longer[i].e = static_cast<double>(i) / 20.0;
    const auto w2 = build_window(longer, spec, profile);
    CHECK(w2[0] == doctest::Approx(longer[longer.size() - spec.window].e));
    CHECK(w2[w2.size() - spec.features] == doctest::Approx(longer.back().e));
}

TEST_CASE("all four learners solve the deterministic bandit") {
    const EpisodeConfig bandit = bandit_config();
    double oracle_reward = 0.0;
    const int oracle = bandit_oracle(bandit, &oracle_reward);
    CHECK(oracle == 9);  // level 1.0
    CHECK(oracle_reward == doctest::Approx(2.7).epsilon(1e-12));

    const EnvFactory factory = make_env_factory(bandit);

    SUBCASE("a3c hybrid") {
        const TrainResult r = a3c_train(factory, bandit_train_config(100), nn::NetSpec::hybrid());
        CHECK_FALSE(r.diverged);
        CHECK(greedy_total(nn::NetSpec::hybrid(), r.params, bandit) ==
              doctest::Approx(oracle_reward));
        CHECK(r.steps >= 5000);
        CHECK(r.episodes >= 5000);  // one-step episodes
        CHECK(r.updates > 0);
    }
    SUBCASE("a3c mlp ablation") {
        const TrainResult r = a3c_mlp_train(factory, bandit_train_config(101));
        CHECK_FALSE(r.diverged);
        CHECK(greedy_total(nn::NetSpec::mlp(), r.params, bandit) == doctest::Approx(oracle_reward));
    }
    SUBCASE("a3c lstm ablation") {
        const TrainResult r = a3c_lstm_train(factory, bandit_train_config(102));
        CHECK_FALSE(r.diverged);
        CHECK(greedy_total(nn::NetSpec::lstm_only(), r.params, bandit) ==
              doctest::Approx(oracle_reward));
    }
    SUBCASE("dqn competitor") {
        DqnConfig cfg;
        cfg.total_steps = 6000;
        cfg.lr = 7e-4;
        cfg.reward_scale = 1.0;
        cfg.warmup = 200;
        cfg.target_sync = 250;
        cfg.eval_every = 1000;
        cfg.eval_episodes = 3;
        cfg.seed = 100;
        const TrainResult r = dqn_train(factory, cfg, nn::NetSpec::hybrid());
        CHECK_FALSE(r.diverged);
        CHECK(greedy_total(nn::NetSpec::hybrid(), r.params, bandit) ==
              doctest::Approx(oracle_reward));
    }
}

TEST_CASE("a3c plans through a trend switch at 95% of the enumerated optimum") {
    EpisodeConfig cfg;
    cfg.horizon = 5;
    cfg.stage = SkillStage::Acquisition;
    cfg.behavior.sigma = 0.0;
    cfg.behavior.rho = 1.0;
    cfg.trend = TrendSchedule::custom({{0, 1.0}, {3, 1.4}});

    const double optimum = planning_optimum(cfg);
    CHECK(optimum == doctest::Approx(16.4943).epsilon(1e-4));

    TrainConfig tc;
    tc.total_steps = 10000;
    tc.t_max = 5;
    tc.lr = 7e-4;
    tc.entropy_coef = 1e-3;
    tc.reward_scale = 0.5;
    tc.eval_every = 2000;
    tc.eval_episodes = 3;
    tc.seed = 300;

    const TrainResult r = a3c_train(make_env_factory(cfg), tc, nn::NetSpec::hybrid());
    CHECK_FALSE(r.diverged);
    const double total = greedy_total(nn::NetSpec::hybrid(), r.params, cfg);
    CHECK(total >= 0.95 * optimum);
}

TEST_CASE("single-worker training is bit-deterministic") {
    const EnvFactory factory = make_env_factory(bandit_config());
    TrainConfig cfg = bandit_train_config(777);
    cfg.total_steps = 2000;

    const TrainResult a = a3c_train(factory, cfg, nn::NetSpec::hybrid());
    const TrainResult b = a3c_train(factory, cfg, nn::NetSpec::hybrid());

    REQUIRE(a.params.size() == b.params.size());
    CHECK(std::memcmp(a.params.data(), b.params.data(), a.params.size() * sizeof(double)) == 0);
    REQUIRE(a.curve.points.size() == b.curve.points.size());
    for (std::size_t i = 0; i < a.curve.points.size(); ++i) {
        CHECK(a.curve.points[i].step == b.curve.points[i].step);
        CHECK(a.curve.points[i].eval_mean == b.curve.points[i].eval_mean);
        CHECK(a.curve.points[i].eval_std == b.curve.points[i].eval_std);
    }
    // Curve steps strictly increase and end at the budget.
    for (std::size_t i = 1; i < a.curve.points.size(); ++i) {
        CHECK(a.curve.points[i].step > a.curve.points[i - 1].step);
    }
    CHECK(a.curve.points.back().step >= cfg.total_steps);

    // A different seed walks a different trajectory.
    cfg.seed = 778;
    const TrainResult c = a3c_train(factory, cfg, nn::NetSpec::hybrid());
    CHECK(std::memcmp(a.params.data(), c.params.data(), a.params.size() * sizeof(double)) != 0);
}

TEST_CASE("dqn epsilon schedule is linear with the documented endpoints") {
    DqnConfig cfg;
    cfg.total_steps = 10000;
    cfg.eps_start = 1.0;
    cfg.eps_end = 0.05;

    // Default horizon is total_steps / 2.
    CHECK(dqn_epsilon(cfg, 0) == doctest::Approx(1.0));
    CHECK(dqn_epsilon(cfg, 2500) == doctest::Approx(0.525));
    CHECK(dqn_epsilon(cfg, 5000) == doctest::Approx(0.05));
    CHECK(dqn_epsilon(cfg, 9999) == doctest::Approx(0.05));

    cfg.eps_decay_steps = 1000;
    CHECK(dqn_epsilon(cfg, 500) == doctest::Approx(0.525));
    CHECK(dqn_epsilon(cfg, 1000) == doctest::Approx(0.05));

    // Monotone nonincreasing along the whole schedule.
    cfg.eps_decay_steps = 0;
    double prev = 2.0;
    for (long long s = 0; s <= cfg.total_steps; s += 250) {
        const double eps = dqn_epsilon(cfg, s);
        CHECK(eps <= prev);
        prev = eps;
    }
}

TEST_CASE("evaluation uses paired seeds and is rerun-stable") {
    EpisodeConfig base;
    base.horizon = 30;
    base.seed = 0;

    EvalContext ctx;
    ctx.group = "G1";
    ctx.strategy = "weak";

    FixedPolicy weak(0.2);
    const auto a = evaluate(weak, base, ctx, 5, 9000);
    const auto b = evaluate(weak, base, ctx, 5, 9000);
    REQUIRE(a.size() == 5);
    REQUIRE(b.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].total_reward == b[i].total_reward);  // bitwise rerun stability
        CHECK(a[i].rep == static_cast<int>(i));
        CHECK(a[i].seed == 9000 + i);
        CHECK(a[i].strategy == "weak");
        CHECK(a[i].group == "G1");
        CHECK(a[i].env == "E1");
        CHECK(a[i].stage == "acquisition");
        CHECK(a[i].rewards.empty());  // trajectories off by default
    }
    CHECK(mean_total(a) == doctest::Approx((a[0].total_reward + a[1].total_reward +
                                            a[2].total_reward + a[3].total_reward +
                                            a[4].total_reward) /
                                           5.0));

    // Same base seed, different strategy: the episode noise stream is shared,
    // so a rho=0 user behaves identically under both policies.
    EpisodeConfig ignore = base;
    ignore.behavior.rho = 0.0;
    FixedPolicy strong(1.0);
    EvalContext ctx2 = ctx;
    ctx2.strategy = "strong";
    const auto wa = evaluate(weak, ignore, ctx, 5, 9000, true);
    const auto sa = evaluate(strong, ignore, ctx2, 5, 9000, true);
    for (std::size_t i = 0; i < wa.size(); ++i) {
        REQUIRE(wa[i].rewards.size() == 30);
        REQUIRE(sa[i].rewards.size() == 30);
    }
}

TEST_CASE("converging_steps walks back from the final plateau") {
    auto curve_of = [](std::vector<double> means) {
        LearningCurve c;
        long long step = 0;
        for (double m : means) {
            step += 1000;
            c.points.push_back({step, m, 0.0});
        }
        return c;
    };

    // Converges at the third point: 96 is within 5 of final 100.
    CHECK(converging_steps(curve_of({0.0, 50.0, 96.0, 99.0, 100.0})) == 3000);
    // Flat curve converges at its first point.
    CHECK(converging_steps(curve_of({10.0, 10.0, 10.0})) == 1000);
    // A late excursion resets convergence to the final point.
    CHECK(converging_steps(curve_of({100.0, 100.0, 50.0, 100.0})) == 4000);
    // Single point.
    CHECK(converging_steps(curve_of({42.0})) == 1000);
    CHECK_THROWS_AS(converging_steps(LearningCurve{}), std::domain_error);
}
