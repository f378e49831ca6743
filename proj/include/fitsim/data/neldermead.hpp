#pragma once

#include <functional>
#include <vector>

namespace fitsim::data {

struct NelderMeadOptions {
    double tolerance = 1e-8;  // stop when max |f_i - f_best| over the simplex < tolerance
    int max_evals = 10000;
    // Standard coefficients (reflection, expansion, contraction, shrink).
    double alpha = 1.0;
    double gamma = 2.0;
    double rho = 0.5;
    double sigma = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evals = 0;
    bool converged = false;  // spread criterion met before the eval budget ran out
};

// Derivative-free simplex minimization of `f`. The initial simplex is x0
// plus one vertex per dimension offset by `step` along that axis. `f` must
// return a finite value (use penalties for constraints).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step,
                             const NelderMeadOptions& options = {});

}  // namespace fitsim::data
