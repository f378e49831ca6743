#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fitsim/agents/policies.hpp"
#include "fitsim/environment.hpp"
#include "fitsim/nn/net.hpp"
#include "fitsim/nn/optimizer.hpp"

namespace fitsim::agents {

// Asynchronous advantage actor-critic hyperparameters.
struct TrainConfig {
    int workers = 1;                // N_l
    long long total_steps = 50000;  // T_max, global environment-step budget
    double gamma = 0.99;            // discount for training returns
    int t_max = 20;                 // rollout segment length
    double lr = 7e-4;
    double entropy_coef = 0.01;   // beta_e at step 0
    double entropy_final = -1.0;  // beta_e at total_steps; <0 keeps it constant
    double value_coef = 0.5;      // c_v
    double clip_norm = 40.0;
    // Training-only return scaling; keeps n-step returns near unit scale so
    // one learning rate works across reward magnitudes. Evaluation rewards
    // are never scaled.
    double reward_scale = 0.1;
    std::uint64_t seed = 0;
    long long eval_every = 1000;  // global steps between learning-curve points
    int eval_episodes = 10;       // episodes per curve point
    // Return the parameters of the best evaluation point instead of the last
    // ones; guards against late-training policy drift.
    bool return_best = true;

    void validate() const;
};

struct CurvePoint {
    long long step = 0;
    double eval_mean = 0.0;
    double eval_std = 0.0;
};

// Periodic greedy-evaluation means over training; steps strictly increasing.
struct LearningCurve {
    std::vector<CurvePoint> points;
};

struct TrainResult {
    nn::ParamVector params;  // final parameters (last valid ones on divergence)
    LearningCurve curve;
    bool diverged = false;
    long long steps = 0;     // global environment steps consumed
    long long episodes = 0;  // episodes completed across all workers
    long long updates = 0;   // gradient updates applied
};

// Yields an independent environment whose episode stream is fully
// determined by `seed`.
using EnvFactory = std::function<Environment(std::uint64_t seed)>;

EnvFactory make_env_factory(EpisodeConfig base);

// Trains the actor-critic agent: N_l workers repeatedly snapshot the shared
// parameters, roll t_max steps sampling a_t ~ softmax(logits), compute
// n-step returns with a bootstrap value at the segment end, and apply the
// policy-gradient update through the shared RMSProp store. Deterministic
// run-to-run when workers == 1. On divergence (non-finite loss, logits or
// evaluation) training aborts and the last valid parameters are returned
// with diverged = true.
TrainResult a3c_train(const EnvFactory& factory, const TrainConfig& cfg,
                      const nn::NetSpec& spec);

// Architecture ablations: identical training loop, different network.
TrainResult a3c_mlp_train(const EnvFactory& factory, const TrainConfig& cfg);
TrainResult a3c_lstm_train(const EnvFactory& factory, const TrainConfig& cfg);

// Greedy evaluation of `params` over n episodes seeded mix(seed, i);
// returns (mean, std) of total reward.
std::pair<double, double> eval_params(const nn::PolicyValueNet& net,
                                      const nn::ParamVector& params, const EnvFactory& factory,
                                      std::uint64_t eval_seed, int episodes);

// First global step whose evaluation mean stays within 5% of the final mean
// for the rest of training.
long long converging_steps(const LearningCurve& curve, double tolerance = 0.05);

// Learning-curve CSV: header step,eval_mean,eval_std.
void write_curve_csv(const LearningCurve& curve, const std::string& path);

}  // namespace fitsim::agents
