#pragma once

#include <cstdint>
#include <vector>

#include "fitsim/data/neldermead.hpp"
#include "fitsim/data/series.hpp"
#include "fitsim/types.hpp"

namespace fitsim::data {

// Estimation fits the identifiable subset (alpha, beta, k_f, k_g) plus an
// output scale b0 that maps model performance (unitless) to VO2Max
// (ml/kg/min). The response exponents and base-level decay are weakly
// identified from sparse performance data and stay at documented defaults.
struct EstimateOptions {
    SkillStage stage = SkillStage::Acquisition;
    int n_starts = 8;                    // independent multi-start restarts
    std::uint64_t seed = 0;              // seeds the start-point draws
    double lambda = 1.0;                 // fixed fitness response exponent
    double mu = 1.5;                     // fixed fatigue response exponent
    double delta = 0.9;                  // fixed base-level decay
    NelderMeadOptions nm;                // per-start simplex settings
};

struct EstimationResult {
    UserProfile profile;   // alpha, beta, k_f, k_g fitted; rest from options/defaults
    double b0 = 0.0;       // fitted output scale
    double rss = 0.0;      // residual sum of squares at the optimum
    int evals = 0;         // objective evaluations across all starts
    bool converged = false;  // best start met the simplex spread criterion
};

// Model VO2Max trajectory for a parameter vector: the normalized intensity
// series drives the state recursion day by day (missing days count as e=0),
// and modeled performance is b0 * performance(state). Exposed so tests and
// the round-trip oracle share the exact generator used by the fit.
std::vector<double> model_performance(const IntensitySeries& intensity,
                                      const std::vector<long>& obs_ordinals,
                                      const UserProfile& profile, double b0, SkillStage stage);

// Nonlinear least squares fit of (alpha, beta, k_f, k_g, b0) to observed
// VO2Max. Requires a normalized intensity series and at least 10 performance
// observations inside the intensity date range. Multi-start Nelder-Mead;
// returns the best-RSS start (never worse than any start point).
EstimationResult estimate_profile(const IntensitySeries& intensity,
                                  const PerformanceSeries& performance,
                                  const EstimateOptions& options = {});

}  // namespace fitsim::data
