#pragma once

#include <string>
#include <vector>

#include "fitsim/harness/config.hpp"

namespace fitsim::harness {

struct SweepPoint {
    double m = 0.0;
    double l = 0.0;
    double mean_reward = 0.0;
    int reps = 0;           // >= 1 on success
    bool failed = false;    // training failed at this point; sweep continued
    std::string reason;
};

struct SweepResult {
    std::vector<SweepPoint> m_line;  // m varies, l fixed at the profile value
    std::vector<SweepPoint> l_line;  // l varies, m fixed at the profile value
};

// Sensitivity of mean adaptive reward to the intervention parameters: one
// point per value in the configured m and l grids, n_reps evaluations each.
// retrain_per_point retrains the agent at every point; otherwise the agent
// trained at the base profile is reused and only evaluated.
SweepResult sensitivity_sweep(const HarnessConfig& cfg);

// sweep.csv: header line,m,l,mean_reward,reps,failed.
void write_sweep_csv(const SweepResult& result, const std::string& path);

// Gnuplot script over sweep.csv rendering both sensitivity lines.
void write_sweep_plot_script(const std::string& out_dir);

}  // namespace fitsim::harness
