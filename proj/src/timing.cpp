#include "fitsim/harness/timing.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "fitsim/agents/evaluate.hpp"
#include "fitsim/agents/policies.hpp"
#include "fitsim/harness/grid.hpp"
#include "fitsim/rng.hpp"

namespace fitsim::harness {

namespace {

constexpr std::uint64_t kStreamTiming = 0x71;
constexpr long long kInferencePasses = 10000;

nn::NetSpec timing_spec(Algo algo) {
    switch (algo) {
        case Algo::A3cMlp: return nn::NetSpec::mlp();
        case Algo::A3cLstm: return nn::NetSpec::lstm_only();
        case Algo::A3c:
        case Algo::Dqn: return nn::NetSpec::hybrid();
    }
    throw std::logic_error("unknown algo");
}

// FNV-1a over the algorithm name, for a per-row deterministic train seed.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::vector<TimingRow> timing_report(const std::vector<Algo>& algorithms,
                                     const HarnessConfig& cfg) {
    cfg.validate();
    if (algorithms.empty()) throw std::invalid_argument("timing_report: no algorithms");

    EpisodeConfig base;
    base.horizon = cfg.horizon;
    base.stage = cfg.experiment.stages.front();
    base.profile = cfg.profile;
    base.trend = cfg.trend();
    base.behavior = cfg.behavior;
    base.validate();

    std::vector<TimingRow> rows;
    for (Algo algo : algorithms) {
        TimingRow row;
        row.algorithm = to_string(algo);
        HarnessConfig point = cfg;
        point.algo = algo;
        const std::uint64_t seed =
            mix_seed(cfg.experiment.base_seed, kStreamTiming, fnv1a(row.algorithm));

        const auto t0 = std::chrono::steady_clock::now();
        const auto trained = train_cell(point, base, seed);
        const auto t1 = std::chrono::steady_clock::now();
        row.train_seconds = std::chrono::duration<double>(t1 - t0).count();
        row.diverged = trained.diverged;
        if (!trained.curve.points.empty()) {
            row.converging_step = agents::converging_steps(trained.curve);
            row.final_eval_mean = trained.curve.points.back().eval_mean;
        }

        // Mean per-decision latency on a representative mid-episode window.
        const nn::PolicyValueNet net(timing_spec(algo));
        agents::NetPolicy policy(net, trained.params, base.profile);
        EpisodeConfig episode = base;
        episode.seed = mix_seed(seed, 0x1F);
        Environment env(episode);
        for (int d = 0; d < base.horizon / 2 && !env.done(); ++d) {
            env.step(policy.select_action(env.history()));
        }
        const auto window = agents::build_window(env.history(), net.spec(), base.profile);
        volatile double sink = 0.0;  // keeps the timed loop from being elided
        const auto f0 = std::chrono::steady_clock::now();
        for (long long i = 0; i < kInferencePasses; ++i) {
            sink = sink + net.forward(trained.params, window).value;
        }
        const auto f1 = std::chrono::steady_clock::now();
        row.forward_passes = kInferencePasses;
        row.inference_micros =
            std::chrono::duration<double, std::micro>(f1 - f0).count() / kInferencePasses;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_timing_csv(const std::vector<TimingRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "algorithm,train_seconds,converging_step,final_eval_mean,inference_micros,"
           "forward_passes,diverged\n";
    for (const auto& r : rows) {
        out << r.algorithm << ',' << format_double(r.train_seconds) << ',' << r.converging_step
            << ',' << format_double(r.final_eval_mean) << ',' << format_double(r.inference_micros)
            << ',' << r.forward_passes << ',' << (r.diverged ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace fitsim::harness
