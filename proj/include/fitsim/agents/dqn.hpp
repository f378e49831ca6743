#pragma once

#include <cstdint>

#include "fitsim/agents/a3c.hpp"

namespace fitsim::agents {

// Value-based competitor over the same hybrid trunk; the actor head serves
// as the 10-way Q head.
struct DqnConfig {
    long long total_steps = 50000;
    double gamma = 0.99;
    double lr = 7e-4;
    std::size_t replay_capacity = 100000;  // uniform replay buffer
    int batch_size = 32;
    long long target_sync = 1000;  // env steps between target-network syncs
    int train_interval = 4;        // env steps between gradient updates
    long long warmup = 500;        // env steps before learning starts
    double eps_start = 1.0;        // epsilon-greedy schedule, linear decay
    double eps_end = 0.05;
    long long eps_decay_steps = 0;  // 0 -> half of total_steps
    double reward_scale = 0.1;      // training-only, as in TrainConfig
    double clip_norm = 40.0;
    std::uint64_t seed = 0;
    long long eval_every = 1000;
    int eval_episodes = 10;
    bool return_best = true;  // as in TrainConfig

    void validate() const;
};

// Single-threaded epsilon-greedy Q-learning with uniform replay and a
// periodically synced target network; emits the same learning curve as
// a3c_train. Deterministic per seed.
TrainResult dqn_train(const EnvFactory& factory, const DqnConfig& cfg, const nn::NetSpec& spec);

// Epsilon at a given global step under the linear schedule.
double dqn_epsilon(const DqnConfig& cfg, long long step);

}  // namespace fitsim::agents
