#include "fitsim/data/normalize.hpp"

#include <algorithm>
#include <stdexcept>

namespace fitsim::data {

void normalize_minmax(IntensitySeries& series) {
    series.validate();
    if (series.samples.empty()) throw std::invalid_argument("cannot normalize empty series");
    double lo = series.samples.front().value;
    double hi = lo;
    for (const auto& s : series.samples) {
        lo = std::min(lo, s.value);
        hi = std::max(hi, s.value);
    }
    if (lo == hi) {
        throw std::invalid_argument("cannot normalize constant series (min == max == " +
                                    std::to_string(lo) + ")");
    }
    series.normalized.resize(series.samples.size());
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        series.normalized[i] = (series.samples[i].value - lo) / (hi - lo);
    }
    series.has_normalization = true;
    series.norm_min = lo;
    series.norm_max = hi;
    series.validate();
}

double denormalize(const IntensitySeries& series, double normalized_value) {
    if (!series.has_normalization) {
        throw std::logic_error("series has no normalization metadata");
    }
    return series.norm_min + normalized_value * (series.norm_max - series.norm_min);
}

}  // namespace fitsim::data
