#pragma once

#include <string>
#include <vector>

#include "fitsim/harness/config.hpp"

namespace fitsim::harness {

struct TimingRow {
    std::string algorithm;
    double train_seconds = 0.0;      // wall clock (non-deterministic column)
    long long converging_step = 0;   // agents-module convergence metric
    double final_eval_mean = 0.0;    // last learning-curve point
    double inference_micros = 0.0;   // mean forward latency (non-deterministic)
    long long forward_passes = 0;    // sample size behind inference_micros
    bool diverged = false;
};

// Trains every requested algorithm on the configured cell under the same
// step budget and reports wall time, the converging-step metric, and mean
// per-decision inference latency over at least 10^4 forward passes. Content
// columns (converging step, final eval) are deterministic; wall-clock
// columns are not.
std::vector<TimingRow> timing_report(const std::vector<Algo>& algorithms,
                                     const HarnessConfig& cfg);

// timing.csv: header
// algorithm,train_seconds,converging_step,final_eval_mean,inference_micros,forward_passes,diverged.
void write_timing_csv(const std::vector<TimingRow>& rows, const std::string& path);

}  // namespace fitsim::harness
