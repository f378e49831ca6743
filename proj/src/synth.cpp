#include "fitsim/data/synth.hpp"

#include <cstdio>
#include <stdexcept>

#include "fitsim/rng.hpp"

namespace fitsim::data {

namespace {

constexpr std::uint64_t kStreamProfile = 0x21;
constexpr std::uint64_t kStreamSteps = 0x22;

double truncated_gaussian(Rng& rng, double mean, double stddev) {
    // P(draw < 0) ~ 1.4e-3 here, so rejection terminates almost immediately;
    // the cap keeps the stream layout bounded regardless.
    for (int tries = 0; tries < 100; ++tries) {
        const double v = rng.gaussian(mean, stddev);
        if (v >= 0.0) return v;
    }
    return 0.0;
}

}  // namespace

UserProfile random_profile(std::uint64_t seed) {
    Rng rng(mix_seed(seed, kStreamProfile));
    UserProfile p;
    p.alpha = rng.uniform(0.80, 0.95);
    p.beta = rng.uniform(0.40, 0.70);
    p.lambda = rng.uniform(0.70, 1.00);
    p.mu = rng.uniform(1.00, 2.00);
    p.delta = rng.uniform(0.70, 0.90);
    p.k_f = rng.uniform(0.20, 0.60);
    p.k_g = rng.uniform(0.15, 0.45);
    p.m = rng.uniform(1.00, 3.00);
    p.l = rng.uniform(1.50, 4.50);
    p.validate();
    return p;
}

std::vector<SynthUser> synth_walking_cohort(const SynthOptions& options, std::uint64_t seed) {
    if (options.n_users < 1) throw std::invalid_argument("n_users must be >= 1");
    if (options.n_days < 1) throw std::invalid_argument("n_days must be >= 1");
    const long start = date_ordinal(options.start_date);

    std::vector<SynthUser> users;
    users.reserve(static_cast<std::size_t>(options.n_users));
    for (int u = 0; u < options.n_users; ++u) {
        SynthUser user;
        char id[16];
        std::snprintf(id, sizeof(id), "g1_%03d", u);
        user.profile.user_id = id;
        user.profile.source = "random";
        user.profile.profile = random_profile(mix_seed(seed, static_cast<std::uint64_t>(u)));

        user.steps.user_id = id;
        user.steps.unit = IntensityUnit::Steps;
        Rng rng(mix_seed(seed, kStreamSteps, static_cast<std::uint64_t>(u)));
        user.steps.samples.reserve(static_cast<std::size_t>(options.n_days));
        for (int d = 0; d < options.n_days; ++d) {
            user.steps.samples.push_back(
                {date_from_ordinal(start + d), truncated_gaussian(rng, kStepsMean, kStepsStddev)});
        }
        user.steps.validate();
        users.push_back(std::move(user));
    }
    return users;
}

}  // namespace fitsim::data
