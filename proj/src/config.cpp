#include "fitsim/harness/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace fitsim::harness {

std::string to_string(Algo algo) {
    switch (algo) {
        case Algo::A3c: return "a3c";
        case Algo::A3cMlp: return "a3c_mlp";
        case Algo::A3cLstm: return "a3c_lstm";
        case Algo::Dqn: return "dqn";
    }
    throw std::logic_error("unknown algo");
}

Algo algo_from_string(const std::string& name) {
    if (name == "a3c") return Algo::A3c;
    if (name == "a3c_mlp") return Algo::A3cMlp;
    if (name == "a3c_lstm") return Algo::A3cLstm;
    if (name == "dqn") return Algo::Dqn;
    throw std::invalid_argument("unknown algo '" + name +
                                "' (expected a3c, a3c_mlp, a3c_lstm or dqn)");
}

void ExperimentSpec::validate() const {
    if (groups.empty() || envs.empty() || stages.empty() || strategies.empty()) {
        throw std::invalid_argument("experiment selections must be nonempty");
    }
    for (const auto& g : groups) {
        if (g != "G1" && g != "G2" && g != "G3") {
            throw std::invalid_argument("unknown group '" + g + "'");
        }
    }
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (m_values.empty() || l_values.empty()) {
        throw std::invalid_argument("sweep value lists must be nonempty");
    }
    for (double v : m_values) {
        if (!(v >= 0.0)) throw std::invalid_argument("m values must be >= 0");
    }
    for (double v : l_values) {
        if (!(v >= 0.0)) throw std::invalid_argument("l values must be >= 0");
    }
}

TrendSchedule HarnessConfig::trend() const {
    if (env_id == EnvId::Custom) return TrendSchedule::custom(custom_breakpoints);
    return TrendSchedule::preset(env_id);
}

TrendSchedule HarnessConfig::trend_for(const std::string& env) const {
    const EnvId id = env_from_string(env);
    if (id == EnvId::Custom) return TrendSchedule::custom(custom_breakpoints);
    return TrendSchedule::preset(id);
}

void HarnessConfig::validate() const {
    profile.validate();
    behavior.validate();
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    trend().validate();
    train.validate();
    dqn.validate();
    experiment.validate();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos) return "";
    std::size_t hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
}

// Distinguishes errors already carrying origin:line from ones raised by the
// domain types, which get wrapped by the key dispatcher.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

struct Parser {
    const std::string& origin;
    std::size_t line = 0;

    double number(const std::string& v, const std::string& key) const {
        errno = 0;
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
            fail(origin, line, "invalid number '" + v + "' for " + key);
        }
        return x;
    }

    long long integer(const std::string& v, const std::string& key) const {
        const double x = number(v, key);
        const long long i = static_cast<long long>(x);
        if (static_cast<double>(i) != x) fail(origin, line, key + " must be an integer");
        return i;
    }

    bool boolean(const std::string& v, const std::string& key) const {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        fail(origin, line, "invalid boolean '" + v + "' for " + key);
    }

    std::vector<std::string> list(const std::string& v) const {
        std::vector<std::string> items;
        std::size_t start = 0;
        while (start <= v.size()) {
            std::size_t comma = v.find(',', start);
            if (comma == std::string::npos) comma = v.size();
            const std::string item = trim(v.substr(start, comma - start));
            if (!item.empty()) items.push_back(item);
            start = comma + 1;
        }
        return items;
    }

    std::vector<double> number_list(const std::string& v, const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : list(v)) out.push_back(number(item, key));
        return out;
    }

    // "0:1.0,42:1.4" -> breakpoint pairs.
    std::vector<std::pair<int, double>> breakpoints(const std::string& v) const {
        std::vector<std::pair<int, double>> out;
        for (const auto& item : list(v)) {
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos) {
                fail(origin, line, "breakpoint '" + item + "' must be day:multiplier");
            }
            out.emplace_back(
                static_cast<int>(integer(trim(item.substr(0, colon)), "breakpoint day")),
                number(trim(item.substr(colon + 1)), "breakpoint multiplier"));
        }
        return out;
    }
};

}  // namespace

HarnessConfig parse_config(std::istream& in, const std::string& origin) {
    HarnessConfig cfg;
    Parser p{origin};
    std::string section;
    std::string raw;
    while (std::getline(in, raw)) {
        ++p.line;
        std::string text = raw;
        const std::size_t comment = text.find_first_of("#;");
        if (comment != std::string::npos) text = text.substr(0, comment);
        text = trim(text);
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']') fail(origin, p.line, "unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section != "profile" && section != "env" && section != "behavior" &&
                section != "agent" && section != "experiment") {
                fail(origin, p.line, "unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) fail(origin, p.line, "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) fail(origin, p.line, "empty key");
        if (section.empty()) fail(origin, p.line, "key '" + key + "' outside any section");

        try {
            if (section == "profile") {
                auto& pr = cfg.profile;
                if (key == "alpha") pr.alpha = p.number(value, key);
                else if (key == "beta") pr.beta = p.number(value, key);
                else if (key == "lambda") pr.lambda = p.number(value, key);
                else if (key == "mu") pr.mu = p.number(value, key);
                else if (key == "delta") pr.delta = p.number(value, key);
                else if (key == "k_f") pr.k_f = p.number(value, key);
                else if (key == "k_g") pr.k_g = p.number(value, key);
                else if (key == "m") pr.m = p.number(value, key);
                else if (key == "l") pr.l = p.number(value, key);
                else fail(origin, p.line, "unknown key '" + key + "' in [profile]");
            } else if (section == "env") {
                // "custom" is config-only: preset names stay the valid grid envs.
                if (key == "id") cfg.env_id = value == "custom" ? EnvId::Custom
                                                                : env_from_string(value);
                else if (key == "horizon") cfg.horizon = static_cast<int>(p.integer(value, key));
                else if (key == "breakpoints") cfg.custom_breakpoints = p.breakpoints(value);
                else fail(origin, p.line, "unknown key '" + key + "' in [env]");
            } else if (section == "behavior") {
                if (key == "baseline") cfg.behavior.baseline = p.number(value, key);
                else if (key == "sigma") cfg.behavior.sigma = p.number(value, key);
                else if (key == "rho") cfg.behavior.rho = p.number(value, key);
                else fail(origin, p.line, "unknown key '" + key + "' in [behavior]");
            } else if (section == "agent") {
                auto& t = cfg.train;
                auto& d = cfg.dqn;
                if (key == "algo") cfg.algo = algo_from_string(value);
                else if (key == "workers") t.workers = static_cast<int>(p.integer(value, key));
                else if (key == "total_steps") t.total_steps = d.total_steps = p.integer(value, key);
                else if (key == "gamma") t.gamma = d.gamma = p.number(value, key);
                else if (key == "t_max") t.t_max = static_cast<int>(p.integer(value, key));
                else if (key == "lr") t.lr = d.lr = p.number(value, key);
                else if (key == "entropy_coef") t.entropy_coef = p.number(value, key);
                else if (key == "entropy_final") t.entropy_final = p.number(value, key);
                else if (key == "value_coef") t.value_coef = p.number(value, key);
                else if (key == "clip_norm") t.clip_norm = d.clip_norm = p.number(value, key);
                else if (key == "reward_scale") t.reward_scale = d.reward_scale = p.number(value, key);
                else if (key == "seed") t.seed = d.seed = static_cast<std::uint64_t>(p.integer(value, key));
                else if (key == "eval_every") t.eval_every = d.eval_every = p.integer(value, key);
                else if (key == "eval_episodes") t.eval_episodes = d.eval_episodes = static_cast<int>(p.integer(value, key));
                else if (key == "return_best") t.return_best = d.return_best = p.boolean(value, key);
                else if (key == "replay_capacity") d.replay_capacity = static_cast<std::size_t>(p.integer(value, key));
                else if (key == "batch_size") d.batch_size = static_cast<int>(p.integer(value, key));
                else if (key == "target_sync") d.target_sync = p.integer(value, key);
                else if (key == "train_interval") d.train_interval = static_cast<int>(p.integer(value, key));
                else if (key == "warmup") d.warmup = p.integer(value, key);
                else if (key == "eps_start") d.eps_start = p.number(value, key);
                else if (key == "eps_end") d.eps_end = p.number(value, key);
                else if (key == "eps_decay_steps") d.eps_decay_steps = p.integer(value, key);
                else fail(origin, p.line, "unknown key '" + key + "' in [agent]");
            } else {  // experiment
                auto& e = cfg.experiment;
                if (key == "groups") e.groups = p.list(value);
                else if (key == "envs") e.envs = p.list(value);
                else if (key == "stages") {
                    e.stages.clear();
                    for (const auto& s : p.list(value)) e.stages.push_back(stage_from_string(s));
                } else if (key == "strategies") e.strategies = p.list(value);
                else if (key == "reps") e.reps = static_cast<int>(p.integer(value, key));
                else if (key == "base_seed") e.base_seed = static_cast<std::uint64_t>(p.integer(value, key));
                else if (key == "keep_trajectories") e.keep_trajectories = p.boolean(value, key);
                else if (key == "m_values") e.m_values = p.number_list(value, key);
                else if (key == "l_values") e.l_values = p.number_list(value, key);
                else if (key == "retrain_per_point") e.retrain_per_point = p.boolean(value, key);
                else fail(origin, p.line, "unknown key '" + key + "' in [experiment]");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(origin, p.line, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

HarnessConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(in, path);
}

}  // namespace fitsim::harness
