#include "fitsim/harness/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fitsim::harness {

void RunRecord::validate() const {
    if (!rewards.empty()) {
        double sum = 0.0;
        for (double r : rewards) sum += r;
        if (std::fabs(sum - total_reward) > 1e-9 * std::max(1.0, std::fabs(sum))) {
            throw std::logic_error("run record total does not match its trajectory");
        }
    }
    if (rep < 0) throw std::domain_error("replication index must be nonnegative");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_results_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "group,env,stage,strategy,rep,seed,total_reward\n";
    for (const RunRecord& r : records) {
        os << r.group << ',' << r.env << ',' << r.stage << ',' << r.strategy << ',' << r.rep
           << ',' << r.seed << ',' << format_double(r.total_reward) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> read_results_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty results file: " + path);
    if (line != "group,env,stage,strategy,rep,seed,total_reward") {
        throw std::runtime_error("unexpected results header: " + line);
    }
    std::vector<RunRecord> records;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        RunRecord r;
        std::string rep, seed, total;
        if (!std::getline(ss, r.group, ',') || !std::getline(ss, r.env, ',') ||
            !std::getline(ss, r.stage, ',') || !std::getline(ss, r.strategy, ',') ||
            !std::getline(ss, rep, ',') || !std::getline(ss, seed, ',') ||
            !std::getline(ss, total)) {
            throw std::runtime_error("malformed results row at line " + std::to_string(lineno));
        }
        try {
            r.rep = std::stoi(rep);
            r.seed = std::stoull(seed);
            r.total_reward = std::stod(total);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed results row at line " + std::to_string(lineno));
        }
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace fitsim::harness
