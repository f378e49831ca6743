#include "fitsim/agents/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fitsim::agents {

namespace {

constexpr std::uint64_t kInitStream = 0x11;
constexpr std::uint64_t kEpisodeStream = 0x12;
constexpr std::uint64_t kActStream = 0x13;
constexpr std::uint64_t kReplayStream = 0x14;

struct Transition {
    std::vector<double> window;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_window;
    bool terminal = false;
};

bool all_finite(const nn::ParamVector& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) return false;
    }
    return true;
}

}  // namespace

void DqnConfig::validate() const {
    if (total_steps < 1) throw std::domain_error("total_steps must be positive");
    if (gamma <= 0.0 || gamma > 1.0) throw std::domain_error("gamma must be in (0,1]");
    if (lr <= 0.0) throw std::domain_error("learning rate must be positive");
    if (replay_capacity < static_cast<std::size_t>(batch_size) || batch_size < 1) {
        throw std::domain_error("replay capacity must hold at least one batch");
    }
    if (target_sync < 1 || train_interval < 1) {
        throw std::domain_error("sync/update intervals must be positive");
    }
    if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > eps_start) {
        throw std::domain_error("epsilon schedule must satisfy 0 <= eps_end <= eps_start <= 1");
    }
    if (reward_scale <= 0.0) throw std::domain_error("reward scale must be positive");
    if (eval_every < 1 || eval_episodes < 1) {
        throw std::domain_error("evaluation cadence must be positive");
    }
}

double dqn_epsilon(const DqnConfig& cfg, long long step) {
    const long long horizon = cfg.eps_decay_steps > 0 ? cfg.eps_decay_steps : cfg.total_steps / 2;
    if (horizon <= 0) return cfg.eps_end;
    const double frac = std::min(1.0, static_cast<double>(step) / static_cast<double>(horizon));
    return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac;
}

TrainResult dqn_train(const EnvFactory& factory, const DqnConfig& cfg, const nn::NetSpec& spec) {
    cfg.validate();
    nn::PolicyValueNet net(spec);
    nn::ParamVector params = net.make_params();
    Rng init_rng(mix_seed(cfg.seed, kInitStream));
    net.init_params(params, init_rng);
    nn::ParamVector target = params;

    nn::RmsPropConfig opt_cfg;
    opt_cfg.lr = cfg.lr;
    opt_cfg.clip_norm = cfg.clip_norm;
    nn::RmsProp opt(params, opt_cfg);
    nn::ParamVector grads = params.zeros_like();

    Rng act_rng(mix_seed(cfg.seed, kActStream));
    Rng replay_rng(mix_seed(cfg.seed, kReplayStream));

    std::vector<Transition> replay;
    replay.reserve(std::min<std::size_t>(cfg.replay_capacity, 1 << 16));
    std::size_t replay_next = 0;  // ring-buffer write position once full

    std::uint64_t episode_idx = 0;
    auto next_episode = [&] {
        return factory(mix_seed(cfg.seed, kEpisodeStream, episode_idx++));
    };

    TrainResult result;
    result.params = params;
    nn::ParamVector last_valid = params;
    nn::ParamVector best_params = params;
    double best_mean = -std::numeric_limits<double>::infinity();

    Environment env = next_episode();
    const UserProfile profile = env.config().profile;

    {
        const auto [mean, sd] = eval_params(net, params, factory, cfg.seed, cfg.eval_episodes);
        result.curve.points.push_back({0, mean, sd});
        best_mean = mean;
    }

    long long next_eval = cfg.eval_every;
    bool diverged = false;
    long long step_count = 0;

    try {
        for (step_count = 0; step_count < cfg.total_steps; ++step_count) {
            Transition tr;
            tr.window = build_window(env.history(), spec, profile);
            const double eps = dqn_epsilon(cfg, step_count);
            if (act_rng.uniform() < eps) {
                tr.action = act_rng.uniform_int(spec.actions);
            } else {
                tr.action = nn::argmax(net.forward(params, tr.window).logits);
            }
            const StepResult sr = env.step(GoalAction::from_index(tr.action));
            tr.reward = sr.r_t * cfg.reward_scale;
            tr.terminal = env.done();
            tr.next_window = build_window(env.history(), spec, profile);

            if (replay.size() < cfg.replay_capacity) {
                replay.push_back(std::move(tr));
            } else {
                replay[replay_next] = std::move(tr);
                replay_next = (replay_next + 1) % cfg.replay_capacity;
            }

            if (env.done()) {
                ++result.episodes;
                env = next_episode();
            }

            const long long done_steps = step_count + 1;
            if (done_steps >= cfg.warmup &&
                replay.size() >= static_cast<std::size_t>(cfg.batch_size) &&
                done_steps % cfg.train_interval == 0) {
                grads.fill(0.0);
                const double scale = 1.0 / cfg.batch_size;
                for (int b = 0; b < cfg.batch_size; ++b) {
                    const Transition& t =
                        replay[static_cast<std::size_t>(replay_rng.uniform_int(
                            static_cast<int>(replay.size())))];
                    double y = t.reward;
                    if (!t.terminal) {
                        const nn::NetOutput nxt = net.forward(target, t.next_window);
                        y += cfg.gamma * nxt.logits[static_cast<std::size_t>(
                                 nn::argmax(nxt.logits))];
                    }
                    nn::q_backward(net, params, t.window, t.action, y, scale, grads);
                }
                opt.apply(params, grads);
                ++result.updates;
            }

            if (done_steps % cfg.target_sync == 0) target = params;

            while (next_eval <= done_steps && next_eval <= cfg.total_steps) {
                const auto [mean, sd] =
                    eval_params(net, params, factory, cfg.seed, cfg.eval_episodes);
                if (!std::isfinite(mean)) throw std::runtime_error("evaluation diverged");
                result.curve.points.push_back({next_eval, mean, sd});
                if (all_finite(params)) {
                    last_valid = params;
                    if (mean > best_mean) {
                        best_mean = mean;
                        best_params = params;
                    }
                }
                next_eval += cfg.eval_every;
            }
        }
    } catch (const std::exception&) {
        diverged = true;
    }

    result.steps = step_count;
    result.diverged = diverged;
    if (diverged || !all_finite(params)) {
        result.diverged = true;
        result.params = last_valid;
    } else {
        result.params = params;
        if (result.curve.points.empty() || result.curve.points.back().step < result.steps) {
            const auto [mean, sd] =
                eval_params(net, params, factory, cfg.seed, cfg.eval_episodes);
            result.curve.points.push_back({result.steps, mean, sd});
            if (mean > best_mean) {
                best_mean = mean;
                best_params = params;
            }
        }
        if (cfg.return_best) result.params = best_params;
    }
    return result;
}

}  // namespace fitsim::agents
