#pragma once

#include "fitsim/data/series.hpp"

namespace fitsim::data {

// Min-max normalizes the sample values into [0,1], storing the range
// alongside so the mapping is invertible. A constant series has no
// well-defined range and is an error.
void normalize_minmax(IntensitySeries& series);

// Inverse of normalize_minmax for a single value; requires normalization
// metadata on the series.
double denormalize(const IntensitySeries& series, double normalized_value);

}  // namespace fitsim::data
