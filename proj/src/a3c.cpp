#include "fitsim/agents/a3c.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fitsim/harness/records.hpp"

namespace fitsim::agents {

namespace {

// Stream tags keeping the derived RNG families disjoint.
constexpr std::uint64_t kInitStream = 0x1;
constexpr std::uint64_t kEpisodeStream = 0x2;
constexpr std::uint64_t kSampleStream = 0x3;
constexpr std::uint64_t kEvalStream = 0x4;

bool all_finite(const nn::ParamVector& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) return false;
    }
    return true;
}

}  // namespace

void TrainConfig::validate() const {
    if (workers < 1) throw std::domain_error("workers must be >= 1");
    if (t_max < 1 || total_steps < t_max) {
        throw std::domain_error("require total_steps >= t_max >= 1");
    }
    if (gamma <= 0.0 || gamma > 1.0) throw std::domain_error("gamma must be in (0,1]");
    if (lr <= 0.0) throw std::domain_error("learning rate must be positive");
    if (entropy_coef < 0.0 || value_coef < 0.0) {
        throw std::domain_error("loss coefficients must be nonnegative");
    }
    if (entropy_final > entropy_coef) {
        throw std::domain_error("entropy schedule must be nonincreasing");
    }
    if (reward_scale <= 0.0) throw std::domain_error("reward scale must be positive");
    if (eval_every < 1 || eval_episodes < 1) {
        throw std::domain_error("evaluation cadence must be positive");
    }
}

EnvFactory make_env_factory(EpisodeConfig base) {
    base.validate();
    return [base](std::uint64_t seed) {
        EpisodeConfig cfg = base;
        cfg.seed = seed;
        return Environment(cfg);
    };
}

std::pair<double, double> eval_params(const nn::PolicyValueNet& net,
                                      const nn::ParamVector& params, const EnvFactory& factory,
                                      std::uint64_t eval_seed, int episodes) {
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < episodes; ++i) {
        Environment env = factory(mix_seed(eval_seed, kEvalStream, static_cast<std::uint64_t>(i)));
        NetPolicy policy(net, params, env.config().profile, NetPolicy::Mode::Greedy);
        double total = 0.0;
        while (!env.done()) {
            const GoalAction a = policy.select_action(env.history());
            total += env.step(a).r_t;
        }
        sum += total;
        sumsq += total * total;
    }
    const double mean = sum / episodes;
    const double var = std::max(0.0, sumsq / episodes - mean * mean);
    return {mean, std::sqrt(var)};
}

namespace {

struct TrainerShared {
    nn::SharedParams store;
    std::atomic<long long> global_steps{0};
    std::atomic<long long> episodes{0};
    std::atomic<long long> updates{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> diverged{false};

    // Curve bookkeeping (worker 0 only touches these).
    LearningCurve curve;
    nn::ParamVector last_valid;
    nn::ParamVector best_params;
    double best_mean = -std::numeric_limits<double>::infinity();
    std::mutex curve_mu;

    TrainerShared(nn::ParamVector initial, nn::RmsPropConfig opt)
        : store(std::move(initial), opt) {}

    // Caller holds curve_mu.
    void note_eval(const nn::ParamVector& p, double mean) {
        if (!all_finite(p)) return;
        last_valid = p;
        if (mean > best_mean) {
            best_mean = mean;
            best_params = p;
        }
    }
};

void run_worker(int worker_id, const EnvFactory& factory, const TrainConfig& cfg,
                const nn::PolicyValueNet& net, TrainerShared& shared) {
    Rng sample_rng(mix_seed(cfg.seed, kSampleStream, static_cast<std::uint64_t>(worker_id)));
    std::uint64_t episode_idx = 0;
    auto next_episode = [&] {
        const std::uint64_t s = mix_seed(cfg.seed + static_cast<std::uint64_t>(worker_id),
                                         kEpisodeStream, episode_idx++);
        return factory(s);
    };

    Environment env = next_episode();
    const UserProfile profile = env.config().profile;
    nn::ParamVector grads = net.make_params();
    long long next_eval = cfg.eval_every;

    try {
        while (!shared.stop.load(std::memory_order_relaxed)) {
            const long long start = shared.global_steps.fetch_add(cfg.t_max);
            if (start >= cfg.total_steps) {
                shared.global_steps.fetch_sub(cfg.t_max);
                break;
            }
            const int quota = static_cast<int>(
                std::min<long long>(cfg.t_max, cfg.total_steps - start));

            const nn::ParamVector snapshot = shared.store.snapshot();
            std::vector<nn::SegmentSample> segment;
            segment.reserve(static_cast<std::size_t>(quota));
            int rolled = 0;
            for (; rolled < quota && !env.done(); ++rolled) {
                nn::SegmentSample s;
                s.window = build_window(env.history(), net.spec(), profile);
                const nn::NetOutput out = net.forward(snapshot, s.window);
                s.action = nn::sample_categorical(nn::softmax(out.logits), sample_rng);
                const StepResult sr = env.step(GoalAction::from_index(s.action));
                s.ret = sr.r_t;  // raw reward for now; replaced by the return below
                segment.push_back(std::move(s));
            }
            if (rolled < cfg.t_max) shared.global_steps.fetch_sub(cfg.t_max - rolled);

            double R = 0.0;
            if (!env.done()) {
                const std::vector<double> w = build_window(env.history(), net.spec(), profile);
                R = net.forward(snapshot, w).value;
            }
            for (std::size_t t = segment.size(); t-- > 0;) {
                R = segment[t].ret * cfg.reward_scale + cfg.gamma * R;
                segment[t].ret = R;
            }

            if (!segment.empty()) {
                // Entropy pressure anneals linearly so the policy explores
                // early and can sharpen around small advantage gaps late.
                double beta_e = cfg.entropy_coef;
                if (cfg.entropy_final >= 0.0) {
                    const double frac = std::min(
                        1.0, static_cast<double>(start) / static_cast<double>(cfg.total_steps));
                    beta_e = cfg.entropy_coef + (cfg.entropy_final - cfg.entropy_coef) * frac;
                }
                grads.fill(0.0);
                actor_critic_backward(net, snapshot, segment, beta_e, cfg.value_coef, grads);
                shared.store.apply_gradients(grads);
                shared.updates.fetch_add(1);
            }

            if (env.done()) {
                shared.episodes.fetch_add(1);
                env = next_episode();
            }

            if (worker_id == 0) {
                const long long now = shared.global_steps.load();
                while (next_eval <= now && next_eval <= cfg.total_steps) {
                    const nn::ParamVector p = shared.store.snapshot();
                    const auto [mean, sd] =
                        eval_params(net, p, factory, cfg.seed, cfg.eval_episodes);
                    if (!std::isfinite(mean)) throw std::runtime_error("evaluation diverged");
                    std::lock_guard<std::mutex> lock(shared.curve_mu);
                    shared.curve.points.push_back({next_eval, mean, sd});
                    shared.note_eval(p, mean);
                    next_eval += cfg.eval_every;
                }
            }
        }
    } catch (const std::exception&) {
        shared.diverged.store(true);
        shared.stop.store(true);
    }
}

}  // namespace

TrainResult a3c_train(const EnvFactory& factory, const TrainConfig& cfg,
                      const nn::NetSpec& spec) {
    cfg.validate();
    nn::PolicyValueNet net(spec);
    nn::ParamVector initial = net.make_params();
    Rng init_rng(mix_seed(cfg.seed, kInitStream));
    net.init_params(initial, init_rng);

    nn::RmsPropConfig opt;
    opt.lr = cfg.lr;
    opt.clip_norm = cfg.clip_norm;
    TrainerShared shared(initial, opt);
    shared.last_valid = initial;

    {
        // Curve starts with the untrained policy at step 0.
        const auto [mean, sd] = eval_params(net, initial, factory, cfg.seed, cfg.eval_episodes);
        shared.curve.points.push_back({0, mean, sd});
        shared.note_eval(initial, mean);
    }

    if (cfg.workers == 1) {
        run_worker(0, factory, cfg, net, shared);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(cfg.workers));
        for (int w = 0; w < cfg.workers; ++w) {
            threads.emplace_back(run_worker, w, std::cref(factory), std::cref(cfg),
                                 std::cref(net), std::ref(shared));
        }
        for (std::thread& t : threads) t.join();
    }

    TrainResult result{shared.store.snapshot(), std::move(shared.curve),
                       shared.diverged.load(), shared.global_steps.load(),
                       shared.episodes.load(), shared.updates.load()};

    if (!result.diverged) {
        const auto [mean, sd] =
            eval_params(net, result.params, factory, cfg.seed, cfg.eval_episodes);
        if (std::isfinite(mean) && all_finite(result.params)) {
            if (result.curve.points.empty() || result.curve.points.back().step < result.steps) {
                result.curve.points.push_back({result.steps, mean, sd});
            }
            shared.note_eval(result.params, mean);
        } else {
            result.diverged = true;
        }
    }
    if (result.diverged) {
        result.params = shared.last_valid;
    } else if (cfg.return_best) {
        result.params = shared.best_params;
    }
    return result;
}

TrainResult a3c_mlp_train(const EnvFactory& factory, const TrainConfig& cfg) {
    return a3c_train(factory, cfg, nn::NetSpec::mlp());
}

TrainResult a3c_lstm_train(const EnvFactory& factory, const TrainConfig& cfg) {
    return a3c_train(factory, cfg, nn::NetSpec::lstm_only());
}

long long converging_steps(const LearningCurve& curve, double tolerance) {
    if (curve.points.empty()) throw std::domain_error("empty learning curve");
    const double final_mean = curve.points.back().eval_mean;
    const double band = tolerance * std::fabs(final_mean);
    long long step = curve.points.back().step;
    for (std::size_t i = curve.points.size(); i-- > 0;) {
        if (std::fabs(curve.points[i].eval_mean - final_mean) <= band) {
            step = curve.points[i].step;
        } else {
            break;
        }
    }
    return step;
}

void write_curve_csv(const LearningCurve& curve, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "step,eval_mean,eval_std\n";
    for (const CurvePoint& p : curve.points) {
        os << p.step << ',' << harness::format_double(p.eval_mean) << ','
           << harness::format_double(p.eval_std) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace fitsim::agents
