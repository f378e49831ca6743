#include "fitsim/data/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fitsim/dynamics.hpp"
#include "fitsim/rng.hpp"

namespace fitsim::data {

namespace {

constexpr std::uint64_t kStreamStart = 0x31;

struct Bounds {
    double lo, hi;
};

// Box constraints for the fitted coordinates (alpha, beta, k_f, k_g, b0).
constexpr Bounds kBounds[5] = {
    {1e-3, 0.999}, {1e-3, 0.999}, {1e-6, 10.0}, {1e-6, 10.0}, {1e-6, 1e4}};

double clamp(double v, const Bounds& b) { return std::min(b.hi, std::max(b.lo, v)); }

}  // namespace

std::vector<double> model_performance(const IntensitySeries& intensity,
                                      const std::vector<long>& obs_ordinals,
                                      const UserProfile& profile, double b0, SkillStage stage) {
    if (!intensity.has_normalization) {
        throw std::invalid_argument("model_performance requires a normalized intensity series");
    }
    const long start = date_ordinal(intensity.samples.front().date);
    const long end = date_ordinal(intensity.samples.back().date);
    std::map<long, double> e_by_day;
    for (std::size_t i = 0; i < intensity.samples.size(); ++i) {
        e_by_day[date_ordinal(intensity.samples[i].date)] = intensity.normalized[i];
    }

    std::vector<double> out;
    out.reserve(obs_ordinals.size());
    HealthState state;
    std::size_t next_obs = 0;
    for (long day = start; day <= end && next_obs < obs_ordinals.size(); ++day) {
        auto it = e_by_day.find(day);
        const double e = it == e_by_day.end() ? 0.0 : it->second;  // rest day
        state = update_state(state, e, profile);
        while (next_obs < obs_ordinals.size() && obs_ordinals[next_obs] == day) {
            out.push_back(b0 * performance(state, profile, stage));
            ++next_obs;
        }
    }
    if (next_obs != obs_ordinals.size()) {
        throw std::invalid_argument("observation date outside the intensity date range");
    }
    return out;
}

EstimationResult estimate_profile(const IntensitySeries& intensity,
                                  const PerformanceSeries& performance,
                                  const EstimateOptions& options) {
    intensity.validate();
    performance.validate();
    if (!intensity.has_normalization) {
        throw std::invalid_argument("estimate_profile requires a normalized intensity series");
    }
    if (options.n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");

    const long start = date_ordinal(intensity.samples.front().date);
    const long end = date_ordinal(intensity.samples.back().date);
    std::vector<long> obs_ordinals;
    std::vector<double> observed;
    for (const auto& p : performance.samples) {
        const long ord = date_ordinal(p.date);
        if (ord < start || ord > end) continue;  // outside the driven range
        obs_ordinals.push_back(ord);
        observed.push_back(p.vo2max);
    }
    if (observed.size() < 10) {
        throw std::invalid_argument(
            "need at least 10 performance observations within the intensity date range, got " +
            std::to_string(observed.size()));
    }

    UserProfile base;
    base.lambda = options.lambda;
    base.mu = options.mu;
    base.delta = options.delta;
    base.validate();

    // Output-scale anchor: ratio of observed level to the model level at the
    // default parameters. Keeps all simplex coordinates O(1).
    double obs_mean = 0.0;
    for (double v : observed) obs_mean += v;
    obs_mean /= static_cast<double>(observed.size());
    UserProfile center = base;
    center.alpha = 0.9;
    center.beta = 0.5;
    center.k_f = 0.3;
    center.k_g = 0.2;
    const auto center_model =
        model_performance(intensity, obs_ordinals, center, 1.0, options.stage);
    double center_mean = 0.0;
    for (double v : center_model) center_mean += v;
    center_mean /= static_cast<double>(center_model.size());
    const double b0_center = clamp(obs_mean / std::max(1e-9, center_mean), kBounds[4]);
    const double b0_scale = std::max(1.0, b0_center);

    // Coordinates: (alpha, beta, k_f, k_g, b0 / b0_scale). Out-of-bounds
    // points simulate at the clamped parameters plus a quadratic penalty, so
    // the objective stays finite and the minimum sits inside the box.
    auto objective = [&](const std::vector<double>& x) {
        double penalty = 0.0;
        double raw[5] = {x[0], x[1], x[2], x[3], x[4] * b0_scale};
        double v[5];
        for (int i = 0; i < 5; ++i) {
            v[i] = clamp(raw[i], kBounds[i]);
            const double d = raw[i] - v[i];
            penalty += 1e6 * d * d;
        }
        UserProfile p = base;
        p.alpha = v[0];
        p.beta = v[1];
        p.k_f = v[2];
        p.k_g = v[3];
        const auto model = model_performance(intensity, obs_ordinals, p, v[4], options.stage);
        double rss = 0.0;
        for (std::size_t i = 0; i < model.size(); ++i) {
            const double r = model[i] - observed[i];
            rss += r * r;
        }
        return rss + penalty;
    };

    EstimationResult result;
    bool have_best = false;
    std::vector<double> best_x;
    bool best_converged = false;
    for (int s = 0; s < options.n_starts; ++s) {
        std::vector<double> x0(5);
        if (s == 0) {
            x0 = {0.9, 0.5, 0.3, 0.2, b0_center / b0_scale};
        } else {
            Rng rng(mix_seed(options.seed, kStreamStart, static_cast<std::uint64_t>(s)));
            x0[0] = rng.uniform(0.5, 0.99);
            x0[1] = rng.uniform(0.1, 0.9);
            x0[2] = rng.uniform(0.05, 1.0);
            x0[3] = rng.uniform(0.05, 1.0);
            x0[4] = b0_center / b0_scale * rng.uniform(0.5, 2.0);
        }
        const auto run = nelder_mead(objective, x0, 0.05, options.nm);
        result.evals += run.evals;
        if (!have_best || run.fx < result.rss) {
            have_best = true;
            result.rss = run.fx;
            best_x = run.x;
            best_converged = run.converged;
        }
    }

    result.converged = best_converged;
    result.profile = base;
    result.profile.alpha = clamp(best_x[0], kBounds[0]);
    result.profile.beta = clamp(best_x[1], kBounds[1]);
    result.profile.k_f = clamp(best_x[2], kBounds[2]);
    result.profile.k_g = clamp(best_x[3], kBounds[3]);
    result.b0 = clamp(best_x[4] * b0_scale, kBounds[4]);
    result.profile.validate();
    return result;
}

}  // namespace fitsim::data
