#pragma once

#include <string>
#include <vector>

namespace fitsim::data {

enum class IntensityUnit { Steps, Srpe, Trimp };

std::string to_string(IntensityUnit unit);

// Days since 1970-01-01 for an ISO-8601 calendar date (YYYY-MM-DD).
// Rejects malformed or impossible dates.
long date_ordinal(const std::string& iso_date);

// iso date `days` after the epoch ordinal.
std::string date_from_ordinal(long ordinal);

struct IntensitySample {
    std::string date;  // ISO-8601 day
    double value = 0.0;
};

// Daily exercise-intensity series of one user, in measurement units, with
// optional min-max normalization kept alongside its range metadata so the
// mapping can be inverted.
struct IntensitySeries {
    std::string user_id;
    IntensityUnit unit = IntensityUnit::Steps;
    std::vector<IntensitySample> samples;  // dates strictly increasing, values >= 0
    std::vector<double> normalized;        // empty, or one value in [0,1] per sample
    bool has_normalization = false;
    double norm_min = 0.0;
    double norm_max = 0.0;

    void validate() const;
};

struct PerformancePoint {
    std::string date;
    double vo2max = 0.0;  // ml/kg/min, > 0
};

struct PerformanceSeries {
    std::string user_id;
    std::vector<PerformancePoint> samples;  // dates strictly increasing

    void validate() const;
};

}  // namespace fitsim::data
