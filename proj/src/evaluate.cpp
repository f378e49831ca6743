#include "fitsim/agents/evaluate.hpp"

#include <stdexcept>

namespace fitsim::agents {

std::vector<harness::RunRecord> evaluate(Policy& policy, const EpisodeConfig& base,
                                         const EvalContext& ctx, int n_reps,
                                         std::uint64_t base_seed, bool keep_trajectory) {
    if (n_reps < 1) throw std::domain_error("n_reps must be >= 1");
    std::vector<harness::RunRecord> records;
    records.reserve(static_cast<std::size_t>(n_reps));
    for (int i = 0; i < n_reps; ++i) {
        EpisodeConfig cfg = base;
        cfg.seed = base_seed + static_cast<std::uint64_t>(i);
        policy.reset();
        const RunTrace trace = rollout(policy, cfg);
        harness::RunRecord rec;
        rec.group = ctx.group;
        rec.env = to_string(cfg.trend.id);
        rec.stage = to_string(cfg.stage);
        rec.strategy = ctx.strategy;
        rec.rep = i;
        rec.seed = cfg.seed;
        rec.total_reward = trace.total_reward;
        if (keep_trajectory) {
            rec.rewards.reserve(trace.steps.size());
            for (const EpochStep& s : trace.steps) rec.rewards.push_back(s.reward);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

double mean_total(const std::vector<harness::RunRecord>& records) {
    if (records.empty()) throw std::domain_error("no records");
    double sum = 0.0;
    for (const harness::RunRecord& r : records) sum += r.total_reward;
    return sum / static_cast<double>(records.size());
}

}  // namespace fitsim::agents
