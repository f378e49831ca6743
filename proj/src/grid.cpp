#include "fitsim/harness/grid.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "fitsim/agents/dqn.hpp"
#include "fitsim/agents/evaluate.hpp"
#include "fitsim/agents/policies.hpp"
#include "fitsim/data/estimate.hpp"
#include "fitsim/data/normalize.hpp"
#include "fitsim/data/synth.hpp"
#include "fitsim/rng.hpp"

namespace fitsim::harness {

namespace {

// FNV-1a; std::hash is implementation-defined and would break cross-build
// determinism of the seed derivation.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t kStreamEval = 0xE5;
constexpr std::uint64_t kStreamGroup = 0x61;

nn::NetSpec algo_spec(Algo algo) {
    switch (algo) {
        case Algo::A3cMlp: return nn::NetSpec::mlp();
        case Algo::A3cLstm: return nn::NetSpec::lstm_only();
        case Algo::A3c:
        case Algo::Dqn: return nn::NetSpec::hybrid();
    }
    throw std::logic_error("unknown algo");
}

// Deterministic synthetic subject whose profile is recovered through the
// estimation pipeline; stands in for a device-data user.
UserProfile fitted_profile(const HarnessConfig& cfg) {
    const std::uint64_t seed = mix_seed(cfg.experiment.base_seed, kStreamGroup, fnv1a("G3"));
    data::SynthOptions opts;
    opts.n_users = 1;
    opts.n_days = 84;
    auto users = data::synth_walking_cohort(opts, seed);
    auto& intensity = users[0].steps;
    data::normalize_minmax(intensity);

    UserProfile truth = users[0].profile.profile;
    std::vector<long> obs;
    const long start = data::date_ordinal(intensity.samples.front().date);
    for (int d = 2; d < opts.n_days; d += 3) obs.push_back(start + d);
    const auto clean =
        data::model_performance(intensity, obs, truth, 45.0, SkillStage::Acquisition);
    data::PerformanceSeries perf;
    perf.user_id = intensity.user_id;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        perf.samples.push_back({data::date_from_ordinal(obs[i]), clean[i]});
    }

    data::EstimateOptions eopt;
    eopt.seed = seed;
    UserProfile profile = data::estimate_profile(intensity, perf, eopt).profile;
    profile.m = cfg.profile.m;  // utility terms are not estimable from VO2Max
    profile.l = cfg.profile.l;
    profile.validate();
    return profile;
}

struct CellOutput {
    std::vector<RunRecord> records;
    std::vector<CellFailure> failures;
    std::vector<CellCurve> curves;
};

CellOutput run_cell(const HarnessConfig& cfg, const CellKey& cell, SkillStage stage) {
    CellOutput out;
    const EpisodeConfig base = cell_episode_config(cfg, cell.group, cell.env, stage);
    const std::uint64_t eval_base =
        mix_seed(cfg.experiment.base_seed, fnv1a(cell.label()), kStreamEval);

    const auto& strategies = cfg.experiment.strategies;
    const bool wants_adaptive =
        std::find(strategies.begin(), strategies.end(), "adaptive") != strategies.end();

    nn::PolicyValueNet net(algo_spec(cfg.algo));
    nn::ParamVector adaptive_params = net.make_params();
    if (wants_adaptive) {
        agents::TrainResult trained;
        try {
            trained = train_cell(cfg, base, cell_seed(cfg.experiment.base_seed, cell));
        } catch (const std::exception& e) {
            out.failures.push_back({cell, e.what()});
            return out;
        }
        if (trained.diverged) {
            out.failures.push_back({cell, "training diverged"});
            return out;
        }
        adaptive_params = std::move(trained.params);
        out.curves.push_back({cell, std::move(trained.curve)});
    }

    for (const auto& strategy : strategies) {
        agents::EvalContext ctx{cell.group, strategy};
        std::unique_ptr<Policy> policy;
        if (strategy == "adaptive") {
            policy = std::make_unique<agents::NetPolicy>(net, adaptive_params, base.profile);
        } else {
            policy = agents::make_baseline_policy(strategy);
        }
        auto records = agents::evaluate(*policy, base, ctx, cfg.experiment.reps, eval_base,
                                        cfg.experiment.keep_trajectories);
        out.records.insert(out.records.end(), std::make_move_iterator(records.begin()),
                           std::make_move_iterator(records.end()));
    }
    return out;
}

}  // namespace

UserProfile group_profile(const HarnessConfig& cfg, const std::string& group) {
    if (group == "G1") return cfg.profile;
    if (group == "G2") {
        return data::random_profile(mix_seed(cfg.experiment.base_seed, kStreamGroup, fnv1a("G2")));
    }
    if (group == "G3") return fitted_profile(cfg);
    throw std::invalid_argument("unknown group '" + group + "'");
}

EpisodeConfig cell_episode_config(const HarnessConfig& cfg, const std::string& group,
                                  const std::string& env, SkillStage stage) {
    EpisodeConfig base;
    base.horizon = cfg.horizon;
    base.stage = stage;
    base.profile = group_profile(cfg, group);
    base.trend = cfg.trend_for(env);
    base.behavior = cfg.behavior;
    base.seed = 0;
    base.validate();
    return base;
}

std::uint64_t cell_seed(std::uint64_t base_seed, const CellKey& cell) {
    return mix_seed(base_seed, fnv1a(cell.label()));
}

agents::TrainResult train_cell(const HarnessConfig& cfg, const EpisodeConfig& base,
                               std::uint64_t seed) {
    const auto factory = agents::make_env_factory(base);
    switch (cfg.algo) {
        case Algo::A3c: {
            agents::TrainConfig t = cfg.train;
            t.seed = seed;
            return agents::a3c_train(factory, t, nn::NetSpec::hybrid());
        }
        case Algo::A3cMlp: {
            agents::TrainConfig t = cfg.train;
            t.seed = seed;
            return agents::a3c_mlp_train(factory, t);
        }
        case Algo::A3cLstm: {
            agents::TrainConfig t = cfg.train;
            t.seed = seed;
            return agents::a3c_lstm_train(factory, t);
        }
        case Algo::Dqn: {
            agents::DqnConfig d = cfg.dqn;
            d.seed = seed;
            return agents::dqn_train(factory, d, nn::NetSpec::hybrid());
        }
    }
    throw std::logic_error("unknown algo");
}

GridResult run_grid(const HarnessConfig& cfg, int workers) {
    cfg.validate();
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");

    struct Cell {
        CellKey key;
        SkillStage stage;
    };
    std::vector<Cell> cells;
    for (const auto& group : cfg.experiment.groups) {
        for (const auto& env : cfg.experiment.envs) {
            for (SkillStage stage : cfg.experiment.stages) {
                cells.push_back({{group, env, to_string(stage)}, stage});
            }
        }
    }

    // Each cell writes its own slot; merge order is by cell index, so the
    // result does not depend on thread scheduling.
    std::vector<CellOutput> outputs(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                outputs[i] = run_cell(cfg, cells[i].key, cells[i].stage);
            } catch (const std::exception& e) {
                outputs[i] = CellOutput{};
                outputs[i].failures.push_back({cells[i].key, e.what()});
            }
        }
    };
    const int n_threads = std::min<int>(workers, static_cast<int>(cells.size()));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    GridResult result;
    for (auto& out : outputs) {
        result.records.insert(result.records.end(),
                              std::make_move_iterator(out.records.begin()),
                              std::make_move_iterator(out.records.end()));
        result.failures.insert(result.failures.end(), out.failures.begin(), out.failures.end());
        result.curves.insert(result.curves.end(), std::make_move_iterator(out.curves.begin()),
                             std::make_move_iterator(out.curves.end()));
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const RunRecord& a, const RunRecord& b) {
                  return std::tie(a.group, a.env, a.stage, a.strategy, a.rep) <
                         std::tie(b.group, b.env, b.stage, b.strategy, b.rep);
              });
    return result;
}

std::vector<ImprovementRow> improvement_table(const std::vector<RunRecord>& records) {
    struct Acc {
        double sum = 0.0;
        int n = 0;
    };
    std::map<std::tuple<std::string, std::string, std::string>, std::map<std::string, Acc>> cells;
    for (const auto& r : records) {
        auto& acc = cells[{r.group, r.env, r.stage}][r.strategy];
        acc.sum += r.total_reward;
        ++acc.n;
    }

    std::vector<ImprovementRow> rows;
    for (const auto& [key, strategies] : cells) {
        const auto adaptive = strategies.find("adaptive");
        if (adaptive == strategies.end()) {
            throw std::invalid_argument("cell " + std::get<0>(key) + "/" + std::get<1>(key) +
                                        "/" + std::get<2>(key) + " has no adaptive records");
        }
        if (strategies.size() < 2) {
            throw std::invalid_argument("cell " + std::get<0>(key) + "/" + std::get<1>(key) +
                                        "/" + std::get<2>(key) + " has no comparator records");
        }
        const double mean_ml = adaptive->second.sum / adaptive->second.n;
        for (const auto& [name, acc] : strategies) {
            if (name == "adaptive") continue;
            ImprovementRow row;
            row.cell = {std::get<0>(key), std::get<1>(key), std::get<2>(key)};
            row.comparator = name;
            row.mean_adaptive = mean_ml;
            row.mean_comparator = acc.sum / acc.n;
            row.absolute_diff = mean_ml - row.mean_comparator;
            if (row.mean_comparator <= 0.0) {
                row.flagged = true;  // percentage undefined
                row.improvement_pct = 0.0;
            } else {
                row.improvement_pct = 100.0 * (mean_ml - row.mean_comparator) / row.mean_comparator;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_improvements_csv(const std::vector<ImprovementRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "group,env,stage,comparator,mean_adaptive,mean_comparator,improvement_pct,flagged,"
           "absolute_diff\n";
    for (const auto& r : rows) {
        out << r.cell.group << ',' << r.cell.env << ',' << r.cell.stage << ',' << r.comparator
            << ',' << format_double(r.mean_adaptive) << ',' << format_double(r.mean_comparator)
            << ',' << format_double(r.improvement_pct) << ',' << (r.flagged ? 1 : 0) << ','
            << format_double(r.absolute_diff) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_grid_plot_script(const std::vector<RunRecord>& records, const std::string& out_dir) {
    std::map<std::tuple<std::string, std::string, std::string, std::string>,
             std::pair<double, int>>
        means;
    for (const auto& r : records) {
        auto& acc = means[{r.group, r.env, r.stage, r.strategy}];
        acc.first += r.total_reward;
        ++acc.second;
    }
    {
        std::ofstream dat(out_dir + "/plot_grid.dat", std::ios::binary);
        if (!dat) throw std::runtime_error("cannot write plot data in '" + out_dir + "'");
        dat << "# cell strategy mean_total_reward\n";
        for (const auto& [key, acc] : means) {
            dat << std::get<0>(key) << '/' << std::get<1>(key) << '/' << std::get<2>(key) << ' '
                << std::get<3>(key) << ' ' << format_double(acc.first / acc.second) << '\n';
        }
    }
    std::ofstream gp(out_dir + "/plot_grid.gp", std::ios::binary);
    if (!gp) throw std::runtime_error("cannot write plot script in '" + out_dir + "'");
    gp << "# gnuplot script: mean total reward per strategy and cell\n"
          "set terminal pngcairo size 1200,600\n"
          "set output 'grid_means.png'\n"
          "set style data histogram\n"
          "set style fill solid 0.8\n"
          "set xtics rotate by -45\n"
          "set ylabel 'mean total reward'\n"
          "set key outside\n"
          "plot 'plot_grid.dat' using 3:xtic(stringcolumn(1).' '.stringcolumn(2)) "
          "title 'mean total reward'\n";
}

}  // namespace fitsim::harness
