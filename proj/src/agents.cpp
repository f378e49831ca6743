#include "fitsim/agents/policies.hpp"

#include <algorithm>
#include <stdexcept>

namespace fitsim::agents {

std::vector<double> build_window(const std::vector<EpochRecord>& history, const nn::NetSpec& spec,
                                 const UserProfile& profile) {
    const int W = spec.window;
    const int F = spec.features;
    if (F != 6) throw std::invalid_argument("observation builder expects 6 features per epoch");
    std::vector<double> window(static_cast<std::size_t>(W) * F, 0.0);
    const double f_scale = 1.0 - profile.alpha;  // stationary bound of the fitness stock
    const double g_scale = 1.0 - profile.beta;
    const int n = static_cast<int>(history.size());
    const int take = std::min(W, n);
    for (int i = 0; i < take; ++i) {
        const EpochRecord& rec = history[static_cast<std::size_t>(n - take + i)];
        double* row = window.data() + static_cast<std::size_t>(W - take + i) * F;
        row[0] = rec.e;
        row[1] = rec.b;
        row[2] = rec.f * f_scale;
        row[3] = rec.g * g_scale;
        row[4] = rec.action_level;
        row[5] = rec.day_frac;
    }
    return window;
}

const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names{"adaptive",        "weak", "slightly_weak",
                                                "slightly_strong", "strong", "none"};
    return names;
}

double strategy_level(const std::string& name) {
    if (name == "weak") return 0.2;
    if (name == "slightly_weak") return 0.4;
    if (name == "slightly_strong") return 0.7;
    if (name == "strong") return 1.0;
    throw std::domain_error("no fixed level for strategy: " + name);
}

std::unique_ptr<Policy> make_baseline_policy(const std::string& name) {
    if (name == "none") return std::make_unique<NoServicePolicy>();
    if (name == "adaptive") {
        throw std::domain_error("adaptive strategy requires trained parameters");
    }
    return std::make_unique<FixedPolicy>(strategy_level(name));
}

}  // namespace fitsim::agents
