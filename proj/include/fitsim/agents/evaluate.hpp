#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fitsim/environment.hpp"
#include "fitsim/harness/records.hpp"

namespace fitsim::agents {

// Labels attached to every record produced by one evaluation batch.
struct EvalContext {
    std::string group = "G1";
    std::string strategy;
};

// Runs n_reps greedy episodes of `policy` on the configured environment.
// Replication i uses seed base_seed + i, so strategies evaluated with the
// same base seed share episode streams (paired design). The env/stage
// labels are derived from `base`.
std::vector<harness::RunRecord> evaluate(Policy& policy, const EpisodeConfig& base,
                                         const EvalContext& ctx, int n_reps,
                                         std::uint64_t base_seed, bool keep_trajectory = false);

// Sample mean of total rewards.
double mean_total(const std::vector<harness::RunRecord>& records);

}  // namespace fitsim::agents
