#pragma once

#include <string>
#include <vector>

#include "fitsim/agents/a3c.hpp"
#include "fitsim/harness/config.hpp"
#include "fitsim/harness/records.hpp"

namespace fitsim::harness {

struct CellKey {
    std::string group;
    std::string env;
    std::string stage;

    std::string label() const { return group + "/" + env + "/" + stage; }
};

struct CellFailure {
    CellKey cell;
    std::string reason;
};

struct CellCurve {
    CellKey cell;
    agents::LearningCurve curve;
};

struct GridResult {
    // Sorted by (group, env, stage, strategy, rep) regardless of worker count.
    std::vector<RunRecord> records;
    std::vector<CellFailure> failures;
    std::vector<CellCurve> curves;  // adaptive learning curve per trained cell
};

// The profile driving a cell: G1 uses the configured profile, G2 a randomly
// generated one, G3 one fitted from a synthetic user's data via the full
// estimation pipeline. All derivations are deterministic in base_seed.
UserProfile group_profile(const HarnessConfig& cfg, const std::string& group);

// Episode configuration of one cell (seed is set per rollout by callers).
EpisodeConfig cell_episode_config(const HarnessConfig& cfg, const std::string& group,
                                  const std::string& env, SkillStage stage);

// Deterministic per-cell seed derived from the experiment base seed.
std::uint64_t cell_seed(std::uint64_t base_seed, const CellKey& cell);

// Trains the configured adaptive algorithm on one cell.
agents::TrainResult train_cell(const HarnessConfig& cfg, const EpisodeConfig& base,
                               std::uint64_t seed);

// Full experiment grid: one adaptive training per (group, env, stage) cell,
// paired evaluation of every strategy, n_reps each. Diverged cells are
// recorded as failures and skipped; the grid continues. `workers` > 1 runs
// cells in parallel; the collected output is identical either way.
GridResult run_grid(const HarnessConfig& cfg, int workers = 1);

struct ImprovementRow {
    CellKey cell;
    std::string comparator;
    double mean_adaptive = 0.0;
    double mean_comparator = 0.0;
    double improvement_pct = 0.0;  // 100*(mean_adaptive - mean_comparator)/mean_comparator
    bool flagged = false;          // comparator mean <= 0: percentage undefined
    double absolute_diff = 0.0;    // reported instead when flagged
};

// Per-cell percentage improvement of the adaptive strategy over every
// comparator present in the records.
std::vector<ImprovementRow> improvement_table(const std::vector<RunRecord>& records);

// improvements.csv: header
// group,env,stage,comparator,mean_adaptive,mean_comparator,improvement_pct,flagged,absolute_diff.
void write_improvements_csv(const std::vector<ImprovementRow>& rows, const std::string& path);

// Emits a gnuplot script rendering mean total reward per strategy and cell
// from results.csv (plot data next to it).
void write_grid_plot_script(const std::vector<RunRecord>& records, const std::string& out_dir);

}  // namespace fitsim::harness
