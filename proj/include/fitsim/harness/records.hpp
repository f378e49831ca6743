#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fitsim::harness {

// One replication of one strategy on one grid cell; the unit of all
// statistics. The trajectory is optional; when kept, total_reward equals
// the sum of its entries.
struct RunRecord {
    std::string group;     // G1 / G2 / G3
    std::string env;       // E1..E4
    std::string stage;     // acquisition / retention
    std::string strategy;  // adaptive, weak, ..., none
    int rep = 0;
    std::uint64_t seed = 0;
    double total_reward = 0.0;
    std::vector<double> rewards;  // per-epoch, optional

    void validate() const;
};

// Formats a double with enough digits to round-trip bit-exactly, so CSV
// output is byte-identical across runs of a deterministic pipeline.
std::string format_double(double v);

// results.csv: header group,env,stage,strategy,rep,seed,total_reward.
void write_results_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_results_csv(const std::string& path);

}  // namespace fitsim::harness
