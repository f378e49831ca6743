#include "fitsim/data/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fitsim::data {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (!(step != 0.0)) throw std::invalid_argument("nelder_mead: step must be nonzero");
    if (options.max_evals < static_cast<int>(n) + 1) {
        throw std::invalid_argument("nelder_mead: eval budget below simplex size");
    }

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evals;
        const double v = f(x);
        if (std::isnan(v)) throw std::domain_error("nelder_mead: objective returned NaN");
        return v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fs[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    while (result.evals < options.max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        double spread = 0.0;
        for (std::size_t i = 0; i <= n; ++i) spread = std::max(spread, fs[i] - fs[best]);
        if (spread < options.tolerance) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j) {
            xr[j] = centroid[j] + options.alpha * (centroid[j] - simplex[worst][j]);
        }
        const double fr = eval(xr);

        if (fr < fs[best]) {
            for (std::size_t j = 0; j < n; ++j) {
                xe[j] = centroid[j] + options.gamma * (xr[j] - centroid[j]);
            }
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fs[worst] = fe;
            } else {
                simplex[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second_worst]) {
            simplex[worst] = xr;
            fs[worst] = fr;
        } else {
            // Contract toward the better of the reflected and worst points.
            const bool outside = fr < fs[worst];
            const std::vector<double>& toward = outside ? xr : simplex[worst];
            for (std::size_t j = 0; j < n; ++j) {
                xc[j] = centroid[j] + options.rho * (toward[j] - centroid[j]);
            }
            const double fc = eval(xc);
            if (fc < (outside ? fr : fs[worst])) {
                simplex[worst] = xc;
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] =
                            simplex[best][j] + options.sigma * (simplex[i][j] - simplex[best][j]);
                    }
                    if (result.evals >= options.max_evals) break;
                    fs[i] = eval(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fs[i] < fs[best]) best = i;
    }
    result.x = simplex[best];
    result.fx = fs[best];
    return result;
}

}  // namespace fitsim::data
