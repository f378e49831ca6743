#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fitsim/agents/dqn.hpp"
#include "fitsim/agents/evaluate.hpp"
#include "fitsim/agents/policies.hpp"
#include "fitsim/data/csv.hpp"
#include "fitsim/data/estimate.hpp"
#include "fitsim/data/normalize.hpp"
#include "fitsim/data/synth.hpp"
#include "fitsim/data/trimp.hpp"
#include "fitsim/harness/config.hpp"
#include "fitsim/harness/grid.hpp"
#include "fitsim/harness/records.hpp"
#include "fitsim/harness/statistics.hpp"
#include "fitsim/harness/sweep.hpp"
#include "fitsim/harness/timing.hpp"
#include "fitsim/nn/checkpoint.hpp"

namespace {

using namespace fitsim;

// Shared flags; every subcommand takes the same set so invocations compose.
struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    long long seed = -1;  // <0: keep config value
    int reps = -1;
    int workers = 1;
    bool deterministic = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (structured text)");
        cmd->add_option("--seed", seed, "Base seed override");
        cmd->add_option("--reps", reps, "Replications override");
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--workers", workers, "Parallel jobs (grid cells)")
            ->capture_default_str();
        cmd->add_flag("--deterministic", deterministic,
                      "Single-threaded, byte-reproducible outputs");
    }

    harness::HarnessConfig load() const {
        harness::HarnessConfig cfg;
        if (!config_path.empty()) cfg = harness::load_config(config_path);
        if (seed >= 0) {
            cfg.experiment.base_seed = static_cast<std::uint64_t>(seed);
            cfg.train.seed = static_cast<std::uint64_t>(seed);
            cfg.dqn.seed = static_cast<std::uint64_t>(seed);
        }
        if (reps >= 0) cfg.experiment.reps = reps;
        if (deterministic) cfg.train.workers = 1;
        cfg.validate();
        return cfg;
    }

    int grid_workers() const { return deterministic ? 1 : workers; }

    std::string out(const std::string& name) const {
        std::filesystem::create_directories(out_dir);
        return (std::filesystem::path(out_dir) / name).string();
    }
};

EpisodeConfig episode_from(const harness::HarnessConfig& cfg) {
    EpisodeConfig base;
    base.horizon = cfg.horizon;
    base.stage = cfg.experiment.stages.front();
    base.profile = cfg.profile;
    base.trend = cfg.trend();
    base.behavior = cfg.behavior;
    base.seed = cfg.experiment.base_seed;
    base.validate();
    return base;
}

nn::NetSpec spec_for(harness::Algo algo) {
    switch (algo) {
        case harness::Algo::A3cMlp: return nn::NetSpec::mlp();
        case harness::Algo::A3cLstm: return nn::NetSpec::lstm_only();
        case harness::Algo::A3c:
        case harness::Algo::Dqn: return nn::NetSpec::hybrid();
    }
    throw std::logic_error("unknown algo");
}

int cmd_simulate(const CommonArgs& args, const std::string& strategy) {
    const auto cfg = args.load();
    EpisodeConfig episode = episode_from(cfg);

    std::unique_ptr<Policy> policy;
    nn::PolicyValueNet net(spec_for(cfg.algo));
    nn::ParamVector params = net.make_params();
    if (strategy == "adaptive") {
        params = nn::load_checkpoint(args.out("params.bin"));
        policy = std::make_unique<agents::NetPolicy>(net, params, episode.profile);
    } else {
        policy = agents::make_baseline_policy(strategy);
    }

    const RunTrace trace = rollout(*policy, episode);
    std::printf("day  goal   e      b      f       g       reward\n");
    for (std::size_t d = 0; d < trace.steps.size(); ++d) {
        const auto& s = trace.steps[d];
        std::printf("%3zu  %4.1f  %5.3f  %5.3f  %6.3f  %6.3f  %8.4f\n", d + 1,
                    s.action.level(), s.e, s.state.b, s.state.f, s.state.g, s.reward);
    }
    std::printf("total reward: %.6f over %d epochs (strategy %s, env %s, stage %s)\n",
                trace.total_reward, episode.horizon, strategy.c_str(),
                to_string(episode.trend.id).c_str(), to_string(episode.stage).c_str());
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const auto cfg = args.load();
    const EpisodeConfig base = episode_from(cfg);
    const auto trained = harness::train_cell(cfg, base, cfg.train.seed);

    agents::write_curve_csv(trained.curve, args.out("curve.csv"));
    nn::save_checkpoint(trained.params, args.out("params.bin"));
    std::printf("algo %s: steps=%lld episodes=%lld updates=%lld diverged=%d\n",
                to_string(cfg.algo).c_str(), trained.steps, trained.episodes, trained.updates,
                trained.diverged ? 1 : 0);
    if (!trained.curve.points.empty()) {
        std::printf("final eval mean %.4f, converging step %lld\n",
                    trained.curve.points.back().eval_mean,
                    agents::converging_steps(trained.curve));
    }
    std::printf("wrote %s and %s\n", args.out("curve.csv").c_str(),
                args.out("params.bin").c_str());
    return trained.diverged ? 1 : 0;
}

int cmd_evaluate(const CommonArgs& args, const std::string& strategy,
                 const std::string& params_path) {
    const auto cfg = args.load();
    const EpisodeConfig base = episode_from(cfg);

    std::unique_ptr<Policy> policy;
    nn::PolicyValueNet net(spec_for(cfg.algo));
    nn::ParamVector params = net.make_params();
    if (strategy == "adaptive") {
        const std::string path = params_path.empty() ? args.out("params.bin") : params_path;
        params = nn::load_checkpoint(path);
        policy = std::make_unique<agents::NetPolicy>(net, params, base.profile);
    } else {
        policy = agents::make_baseline_policy(strategy);
    }

    agents::EvalContext ctx{"G1", strategy};
    const auto records = agents::evaluate(*policy, base, ctx, cfg.experiment.reps,
                                          cfg.experiment.base_seed);
    harness::write_results_csv(records, args.out("results.csv"));
    std::printf("%s: mean total reward %.4f over %d reps -> %s\n", strategy.c_str(),
                agents::mean_total(records), cfg.experiment.reps,
                args.out("results.csv").c_str());
    return 0;
}

// Pools records per strategy across all cells (the paper's pooling rule) and
// runs the omnibus ANOVA plus reference-vs-rest comparisons.
int run_stats(const std::vector<harness::RunRecord>& records, const std::string& reference,
              const CommonArgs& args) {
    std::map<std::string, std::vector<double>> by_strategy;
    for (const auto& r : records) by_strategy[r.strategy].push_back(r.total_reward);
    if (by_strategy.size() < 2) {
        std::fprintf(stderr, "stats skipped: need >= 2 strategies, have %zu\n",
                     by_strategy.size());
        return 1;
    }

    std::vector<harness::NamedGroup> groups;
    std::vector<std::vector<double>> samples;
    std::printf("strategy            n      mean        sd\n");
    for (const auto& [name, values] : by_strategy) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() - 1);
        std::printf("%-18s %4zu  %9.3f  %8.3f\n", name.c_str(), values.size(), mean,
                    std::sqrt(var));
        groups.push_back({name, values});
        samples.push_back(values);
    }

    const auto anova = harness::anova_oneway(samples);
    std::printf("ANOVA: F(%d,%d) = %.4f, p = %.6g\n", anova.df_between, anova.df_within, anova.f,
                anova.p);

    const auto rows = harness::pairwise_comparisons(groups, reference);
    harness::write_stats_csv(rows, args.out("stats.csv"));
    std::printf("comparison                     diff        se         p     p_bonf          "
                "95%% CI\n");
    for (const auto& r : rows) {
        std::printf("%-26s %9.3f %9.3f  %8.3g  %8.3g  [%9.3f, %9.3f]\n", r.comparison.c_str(),
                    r.mean_diff, r.se, r.p, r.p_bonferroni, r.ci_lo, r.ci_hi);
    }
    std::printf("wrote %s\n", args.out("stats.csv").c_str());
    return 0;
}

int cmd_grid(const CommonArgs& args) {
    const auto cfg = args.load();
    const auto result = harness::run_grid(cfg, args.grid_workers());

    harness::write_results_csv(result.records, args.out("results.csv"));
    for (const auto& f : result.failures) {
        std::fprintf(stderr, "cell %s failed: %s\n", f.cell.label().c_str(), f.reason.c_str());
    }
    for (const auto& c : result.curves) {
        std::string name = "curve_" + c.cell.group + "_" + c.cell.env + "_" + c.cell.stage +
                           ".csv";
        agents::write_curve_csv(c.curve, args.out(name));
    }
    if (!result.records.empty()) {
        const auto improvements = harness::improvement_table(result.records);
        harness::write_improvements_csv(improvements, args.out("improvements.csv"));
        std::printf("cell                                comparator        improvement\n");
        for (const auto& row : improvements) {
            if (row.flagged) {
                std::printf("%-35s %-16s  flagged (comparator mean %.3f <= 0), diff %+0.3f\n",
                            row.cell.label().c_str(), row.comparator.c_str(),
                            row.mean_comparator, row.absolute_diff);
            } else {
                std::printf("%-35s %-16s  %+8.2f%%\n", row.cell.label().c_str(),
                            row.comparator.c_str(), row.improvement_pct);
            }
        }
        harness::write_grid_plot_script(result.records, args.out_dir);
        try {
            run_stats(result.records, "adaptive", args);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "stats skipped: %s\n", e.what());
        }
    }
    std::printf("grid complete: %zu records, %zu failed cells -> %s\n", result.records.size(),
                result.failures.size(), args.out("results.csv").c_str());
    return result.failures.empty() ? 0 : 1;
}

int cmd_stats(const CommonArgs& args, const std::string& results_path,
              const std::string& reference) {
    const std::string path = results_path.empty() ? args.out("results.csv") : results_path;
    const auto records = harness::read_results_csv(path);
    return run_stats(records, reference, args);
}

int cmd_sweep(const CommonArgs& args) {
    const auto cfg = args.load();
    const auto result = harness::sensitivity_sweep(cfg);
    harness::write_sweep_csv(result, args.out("sweep.csv"));
    harness::write_sweep_plot_script(args.out_dir);

    auto report = [](const char* label, const std::vector<harness::SweepPoint>& line,
                     bool vary_m) {
        std::printf("%s\n", label);
        std::vector<double> xs, ys;
        for (const auto& p : line) {
            if (p.failed) {
                std::printf("  m=%.2f l=%.2f  FAILED: %s\n", p.m, p.l, p.reason.c_str());
                continue;
            }
            std::printf("  m=%.2f l=%.2f  mean reward %9.3f (%d reps)\n", p.m, p.l,
                        p.mean_reward, p.reps);
            xs.push_back(vary_m ? p.m : p.l);
            ys.push_back(p.mean_reward);
        }
        if (xs.size() >= 2) {
            std::printf("  Spearman rho = %+.3f\n", harness::spearman_rho(xs, ys));
        }
    };
    report("m line (l fixed):", result.m_line, true);
    report("l line (m fixed):", result.l_line, false);
    std::printf("wrote %s\n", args.out("sweep.csv").c_str());
    return 0;
}

int cmd_estimate(const CommonArgs& args, int synth_users, const std::string& srpe_path,
                 const std::string& sessions_path, const std::string& vo2max_path,
                 const std::string& user_id) {
    const auto cfg = args.load();
    std::vector<data::ProfileRow> rows;

    if (synth_users > 0) {
        data::SynthOptions opts;
        opts.n_users = synth_users;
        opts.n_days = cfg.horizon;
        const auto cohort = data::synth_walking_cohort(opts, cfg.experiment.base_seed);
        double mean_steps = 0.0;
        std::size_t n = 0;
        for (const auto& u : cohort) {
            rows.push_back(u.profile);
            for (const auto& s : u.steps.samples) {
                mean_steps += s.value;
                ++n;
            }
        }
        mean_steps /= static_cast<double>(n);
        std::printf("generated %d synthetic users x %d days, mean %.1f steps/day\n", synth_users,
                    cfg.horizon, mean_steps);
    }

    if (!vo2max_path.empty()) {
        if (sessions_path.empty() && srpe_path.empty()) {
            throw std::invalid_argument("--vo2max needs --sessions or --srpe for intensity");
        }
        data::IntensitySeries intensity;
        if (!sessions_path.empty()) {
            intensity = data::sessions_to_trimp(data::load_sessions(sessions_path), user_id);
        } else {
            const auto srpe = data::load_srpe(srpe_path, user_id);
            if (srpe.dropped_rows > 0) {
                std::printf("dropped %zu sRPE rows with missing exertion\n", srpe.dropped_rows);
            }
            intensity = srpe.series;
        }
        data::normalize_minmax(intensity);
        const auto perf = data::load_vo2max(vo2max_path, user_id);

        data::EstimateOptions opts;
        opts.stage = cfg.experiment.stages.front();
        opts.seed = cfg.experiment.base_seed;
        const auto fit = data::estimate_profile(intensity, perf, opts);
        std::printf("fitted %s: alpha=%.4f beta=%.4f k_f=%.4f k_g=%.4f b0=%.4f rss=%.6g "
                    "evals=%d converged=%d\n",
                    user_id.c_str(), fit.profile.alpha, fit.profile.beta, fit.profile.k_f,
                    fit.profile.k_g, fit.b0, fit.rss, fit.evals, fit.converged ? 1 : 0);
        rows.push_back({user_id, fit.profile, "fitted"});
    } else if (!srpe_path.empty() && synth_users == 0) {
        const auto srpe = data::load_srpe(srpe_path, user_id);
        std::printf("loaded %zu sRPE rows (%zu dropped for missing exertion)\n",
                    srpe.series.samples.size(), srpe.dropped_rows);
    }

    if (rows.empty()) {
        std::printf("nothing to estimate: pass --synth N or --vo2max with an intensity "
                    "source\n");
        return 1;
    }
    data::write_profiles_csv(rows, args.out("profiles.csv"));
    std::printf("wrote %zu profiles -> %s\n", rows.size(), args.out("profiles.csv").c_str());
    return 0;
}

int cmd_timing(const CommonArgs& args, const std::string& algos_csv) {
    const auto cfg = args.load();
    std::vector<harness::Algo> algos;
    std::string token;
    for (std::size_t i = 0; i <= algos_csv.size(); ++i) {
        if (i == algos_csv.size() || algos_csv[i] == ',') {
            if (!token.empty()) algos.push_back(harness::algo_from_string(token));
            token.clear();
        } else if (!std::isspace(static_cast<unsigned char>(algos_csv[i]))) {
            token += algos_csv[i];
        }
    }
    const auto rows = harness::timing_report(algos, cfg);
    harness::write_timing_csv(rows, args.out("timing.csv"));
    std::printf("algorithm   train_s  converging_step  final_eval  inference_us\n");
    for (const auto& r : rows) {
        std::printf("%-10s %8.2f  %15lld  %10.3f  %12.3f%s\n", r.algorithm.c_str(),
                    r.train_seconds, r.converging_step, r.final_eval_mean, r.inference_micros,
                    r.diverged ? "  (diverged)" : "");
    }
    std::printf("wrote %s\n", args.out("timing.csv").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Personalized exercise-goal simulation and training harness"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string strategy = "none";
    std::string params_path;
    std::string results_path;
    std::string reference = "adaptive";
    std::string srpe_path, sessions_path, vo2max_path;
    std::string user_id = "user";
    std::string algos_csv = "a3c,a3c_mlp,a3c_lstm,dqn";
    int synth_users = 0;

    auto* simulate = app.add_subcommand("simulate", "Run one episode and print the trajectory");
    args.attach(simulate);
    simulate->add_option("--strategy", strategy, "Strategy (adaptive or a fixed baseline)")
        ->capture_default_str();

    auto* train = app.add_subcommand("train", "Train the adaptive agent on one cell");
    args.attach(train);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a policy over replications");
    args.attach(evaluate);
    evaluate->add_option("--strategy", strategy, "Strategy to evaluate")->capture_default_str();
    evaluate->add_option("--params", params_path, "Checkpoint for the adaptive strategy");

    auto* grid = app.add_subcommand("grid", "Run the full experiment grid");
    args.attach(grid);

    auto* stats = app.add_subcommand("stats", "ANOVA and pairwise comparisons on results.csv");
    args.attach(stats);
    stats->add_option("--results", results_path, "results.csv path (default <out>/results.csv)");
    stats->add_option("--reference", reference, "Reference strategy")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Sensitivity sweep over m and l");
    args.attach(sweep);

    auto* estimate = app.add_subcommand("estimate", "Generate or fit user profiles");
    args.attach(estimate);
    estimate->add_option("--synth", synth_users, "Generate N synthetic walking users");
    estimate->add_option("--srpe", srpe_path, "sRPE CSV (intensity source)");
    estimate->add_option("--sessions", sessions_path, "Sessions CSV (TRIMP intensity source)");
    estimate->add_option("--vo2max", vo2max_path, "VO2Max CSV (fit target)");
    estimate->add_option("--user", user_id, "User id for fitted output")->capture_default_str();

    auto* timing = app.add_subcommand("timing", "Competitor timing report");
    args.attach(timing);
    timing->add_option("--algos", algos_csv, "Comma-separated algorithms")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(args, strategy);
        if (train->parsed()) return cmd_train(args);
        if (evaluate->parsed()) return cmd_evaluate(args, strategy, params_path);
        if (grid->parsed()) return cmd_grid(args);
        if (stats->parsed()) return cmd_stats(args, results_path, reference);
        if (sweep->parsed()) return cmd_sweep(args);
        if (estimate->parsed()) {
            return cmd_estimate(args, synth_users, srpe_path, sessions_path, vo2max_path,
                                user_id);
        }
        if (timing->parsed()) return cmd_timing(args, algos_csv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
