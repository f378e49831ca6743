#include "fitsim/data/series.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fitsim::data {

std::string to_string(IntensityUnit unit) {
    switch (unit) {
        case IntensityUnit::Steps: return "steps";
        case IntensityUnit::Srpe: return "srpe";
        case IntensityUnit::Trimp: return "trimp";
    }
    throw std::logic_error("unknown intensity unit");
}

namespace {

bool all_digits(const std::string& s, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

// Howard Hinnant's days-from-civil algorithm.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int y, int m) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

}  // namespace

long date_ordinal(const std::string& iso_date) {
    if (iso_date.size() != 10 || iso_date[4] != '-' || iso_date[7] != '-' ||
        !all_digits(iso_date, 0, 4) || !all_digits(iso_date, 5, 7) ||
        !all_digits(iso_date, 8, 10)) {
        throw std::invalid_argument("malformed date '" + iso_date + "' (expected YYYY-MM-DD)");
    }
    const int y = std::stoi(iso_date.substr(0, 4));
    const int m = std::stoi(iso_date.substr(5, 2));
    const int d = std::stoi(iso_date.substr(8, 2));
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
        throw std::invalid_argument("invalid calendar date '" + iso_date + "'");
    }
    return days_from_civil(y, m, d);
}

std::string date_from_ordinal(long ordinal) {
    // Inverse of days_from_civil (same reference algorithm).
    long z = ordinal + 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", y + (m <= 2), m, d);
    return std::string(buf);
}

void IntensitySeries::validate() const {
    if (user_id.empty()) throw std::invalid_argument("intensity series requires a user_id");
    long prev = 0;
    bool first = true;
    for (const auto& s : samples) {
        const long ord = date_ordinal(s.date);
        if (!first && ord <= prev) {
            throw std::invalid_argument("intensity dates must be strictly increasing at '" +
                                        s.date + "'");
        }
        prev = ord;
        first = false;
        if (!std::isfinite(s.value) || s.value < 0.0) {
            throw std::invalid_argument("intensity value must be finite and >= 0 on '" + s.date +
                                        "'");
        }
    }
    if (has_normalization) {
        if (normalized.size() != samples.size()) {
            throw std::invalid_argument("normalized series length mismatch");
        }
        for (double v : normalized) {
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw std::invalid_argument("normalized intensity outside [0,1]");
            }
        }
    } else if (!normalized.empty()) {
        throw std::invalid_argument("normalized values present without normalization metadata");
    }
}

void PerformanceSeries::validate() const {
    if (user_id.empty()) throw std::invalid_argument("performance series requires a user_id");
    long prev = 0;
    bool first = true;
    for (const auto& s : samples) {
        const long ord = date_ordinal(s.date);
        if (!first && ord <= prev) {
            throw std::invalid_argument("performance dates must be strictly increasing at '" +
                                        s.date + "'");
        }
        prev = ord;
        first = false;
        if (!std::isfinite(s.vo2max) || s.vo2max <= 0.0) {
            throw std::invalid_argument("vo2max must be finite and > 0 on '" + s.date + "'");
        }
    }
}

}  // namespace fitsim::data
