#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitsim/data/series.hpp"
#include "fitsim/types.hpp"

namespace fitsim::data {

// Raised for malformed CSV input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Splits one CSV line on commas. No quoting: the schemas used here are plain
// numeric/date fields.
std::vector<std::string> split_csv_line(const std::string& line);

struct SrpeLoad {
    IntensitySeries series;       // unit = Srpe, sorted by date
    std::size_t dropped_rows = 0; // rows with a missing exertion value
};

// Loads `date,perceived_exertion` rows (exertion on the 0-10 scale). Rows
// with an empty exertion field are dropped and counted; duplicate dates are
// an error naming the date.
SrpeLoad load_srpe(const std::string& path, const std::string& user_id);

enum class Sex { Male, Female };

Sex parse_sex(const std::string& token);

struct Session {
    std::string date;
    double duration_min = 0.0;
    double avg_hr = 0.0;
    double rest_hr = 0.0;
    double max_hr = 0.0;
    Sex sex = Sex::Male;
};

// Loads `date,duration_min,avg_hr,rest_hr,max_hr,sex` rows, sorted by date.
// Duplicate dates are an error naming the date.
std::vector<Session> load_sessions(const std::string& path);

// Loads `date,vo2max` rows into a performance series sorted by date.
PerformanceSeries load_vo2max(const std::string& path, const std::string& user_id);

struct ProfileRow {
    std::string user_id;
    UserProfile profile;
    std::string source;  // "random" or "fitted"
};

// Writes `user_id,alpha,beta,lambda,mu,delta,k_f,k_g,m,l,source` rows.
void write_profiles_csv(const std::vector<ProfileRow>& rows, const std::string& path);

std::vector<ProfileRow> read_profiles_csv(const std::string& path);

}  // namespace fitsim::data
