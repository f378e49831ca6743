#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fitsim/agents/a3c.hpp"
#include "fitsim/agents/dqn.hpp"
#include "fitsim/environment.hpp"
#include "fitsim/types.hpp"

namespace fitsim::harness {

enum class Algo { A3c, A3cMlp, A3cLstm, Dqn };

std::string to_string(Algo algo);
Algo algo_from_string(const std::string& name);

// Experiment-grid selections ([experiment] section).
struct ExperimentSpec {
    std::vector<std::string> groups{"G1"};
    std::vector<std::string> envs{"E1", "E2", "E3", "E4"};
    std::vector<SkillStage> stages{SkillStage::Acquisition, SkillStage::Retention};
    std::vector<std::string> strategies{"adaptive",        "weak",   "slightly_weak",
                                        "slightly_strong", "strong", "none"};
    int reps = 30;
    std::uint64_t base_seed = 1000;
    bool keep_trajectories = false;
    // Sensitivity sweep settings (Figure-6 style m/l grids).
    std::vector<double> m_values{0.0, 1.0, 2.0, 4.0};
    std::vector<double> l_values{0.0, 1.0, 2.0, 4.0};
    bool retrain_per_point = true;

    void validate() const;
};

// Everything the CLI and harness operations consume, assembled from the
// built-in defaults plus an optional structured config file. Shared training
// keys ([agent] gamma, lr, ...) are mirrored into both the actor-critic and
// DQN configs so one file drives either algorithm.
struct HarnessConfig {
    UserProfile profile;
    int horizon = 84;
    EnvId env_id = EnvId::E1;
    // Nonempty only for env id = custom.
    std::vector<std::pair<int, double>> custom_breakpoints;
    BehaviorModel behavior;
    Algo algo = Algo::A3c;
    agents::TrainConfig train;
    agents::DqnConfig dqn;
    ExperimentSpec experiment;

    TrendSchedule trend() const;                        // from env_id / breakpoints
    TrendSchedule trend_for(const std::string& env) const;  // preset by name

    void validate() const;
};

// Parses the `[section]` / `key = value` config format. Unknown sections or
// keys are errors (typos must not silently fall back to defaults); '#' and
// ';' start comments. `origin` labels error messages.
HarnessConfig parse_config(std::istream& in, const std::string& origin);

HarnessConfig load_config(const std::string& path);

}  // namespace fitsim::harness
