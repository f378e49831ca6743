#include "fitsim/data/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "fitsim/harness/records.hpp"

namespace fitsim::data {

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos) return "";
    std::size_t hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
}

double parse_number(const std::string& path, std::size_t line, const std::string& field,
                    const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseError(path, line, "missing value for " + field);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(path, line, "invalid number '" + t + "' for " + field);
    }
    return v;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

void expect_header(const std::string& path, std::istream& in, const std::string& expected) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "empty file, expected header");
    if (trim(line) != expected) {
        throw ParseError(path, 1, "expected header '" + expected + "', got '" + trim(line) + "'");
    }
}

// Sorts rows by date and rejects duplicates, naming the offending date.
template <typename Row>
void sort_by_date(const std::string& path, std::vector<Row>& rows,
                  const std::string& (*date_of)(const Row&)) {
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        return date_ordinal(date_of(a)) < date_ordinal(date_of(b));
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (date_of(rows[i]) == date_of(rows[i - 1])) {
            throw std::runtime_error(path + ": duplicate date '" + date_of(rows[i]) + "'");
        }
    }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

SrpeLoad load_srpe(const std::string& path, const std::string& user_id) {
    auto in = open_or_throw(path);
    expect_header(path, in, "date,perceived_exertion");
    SrpeLoad out;
    out.series.user_id = user_id;
    out.series.unit = IntensityUnit::Srpe;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 2) throw ParseError(path, lineno, "expected 2 fields, got " +
                                                          std::to_string(f.size()));
        const std::string date = trim(f[0]);
        try {
            date_ordinal(date);
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        if (trim(f[1]).empty()) {  // missing exertion: drop the row, keep count
            ++out.dropped_rows;
            continue;
        }
        const double exertion = parse_number(path, lineno, "perceived_exertion", f[1]);
        if (exertion < 0.0 || exertion > 10.0) {
            throw ParseError(path, lineno, "perceived_exertion outside [0,10]");
        }
        out.series.samples.push_back({date, exertion});
    }
    sort_by_date(path, out.series.samples,
                 +[](const IntensitySample& s) -> const std::string& { return s.date; });
    out.series.validate();
    return out;
}

Sex parse_sex(const std::string& token) {
    const std::string t = trim(token);
    if (t == "M" || t == "m" || t == "male") return Sex::Male;
    if (t == "F" || t == "f" || t == "female") return Sex::Female;
    throw std::invalid_argument("invalid sex '" + t + "' (expected M or F)");
}

std::vector<Session> load_sessions(const std::string& path) {
    auto in = open_or_throw(path);
    expect_header(path, in, "date,duration_min,avg_hr,rest_hr,max_hr,sex");
    std::vector<Session> sessions;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 6) throw ParseError(path, lineno, "expected 6 fields, got " +
                                                          std::to_string(f.size()));
        Session s;
        s.date = trim(f[0]);
        try {
            date_ordinal(s.date);
            s.duration_min = parse_number(path, lineno, "duration_min", f[1]);
            s.avg_hr = parse_number(path, lineno, "avg_hr", f[2]);
            s.rest_hr = parse_number(path, lineno, "rest_hr", f[3]);
            s.max_hr = parse_number(path, lineno, "max_hr", f[4]);
            s.sex = parse_sex(f[5]);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        sessions.push_back(std::move(s));
    }
    sort_by_date(path, sessions, +[](const Session& s) -> const std::string& { return s.date; });
    return sessions;
}

PerformanceSeries load_vo2max(const std::string& path, const std::string& user_id) {
    auto in = open_or_throw(path);
    expect_header(path, in, "date,vo2max");
    PerformanceSeries series;
    series.user_id = user_id;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 2) throw ParseError(path, lineno, "expected 2 fields, got " +
                                                          std::to_string(f.size()));
        PerformancePoint p;
        p.date = trim(f[0]);
        try {
            date_ordinal(p.date);
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        p.vo2max = parse_number(path, lineno, "vo2max", f[1]);
        if (p.vo2max <= 0.0) throw ParseError(path, lineno, "vo2max must be > 0");
        series.samples.push_back(std::move(p));
    }
    sort_by_date(path, series.samples,
                 +[](const PerformancePoint& p) -> const std::string& { return p.date; });
    series.validate();
    return series;
}

void write_profiles_csv(const std::vector<ProfileRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "user_id,alpha,beta,lambda,mu,delta,k_f,k_g,m,l,source\n";
    for (const auto& r : rows) {
        r.profile.validate();
        const auto& p = r.profile;
        out << r.user_id;
        for (double v : {p.alpha, p.beta, p.lambda, p.mu, p.delta, p.k_f, p.k_g, p.m, p.l}) {
            out << ',' << harness::format_double(v);
        }
        out << ',' << r.source << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<ProfileRow> read_profiles_csv(const std::string& path) {
    auto in = open_or_throw(path);
    expect_header(path, in, "user_id,alpha,beta,lambda,mu,delta,k_f,k_g,m,l,source");
    std::vector<ProfileRow> rows;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 11) throw ParseError(path, lineno, "expected 11 fields, got " +
                                                           std::to_string(f.size()));
        ProfileRow r;
        r.user_id = trim(f[0]);
        if (r.user_id.empty()) throw ParseError(path, lineno, "missing user_id");
        auto& p = r.profile;
        double* dest[] = {&p.alpha, &p.beta, &p.lambda, &p.mu, &p.delta,
                          &p.k_f, &p.k_g, &p.m, &p.l};
        const char* names[] = {"alpha", "beta", "lambda", "mu", "delta",
                               "k_f", "k_g", "m", "l"};
        for (int i = 0; i < 9; ++i) {
            *dest[i] = parse_number(path, lineno, names[i], f[1 + i]);
        }
        r.source = trim(f[10]);
        if (r.source != "random" && r.source != "fitted") {
            throw ParseError(path, lineno, "source must be 'random' or 'fitted'");
        }
        try {
            p.validate();
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace fitsim::data
