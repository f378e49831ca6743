#pragma once

#include <string>

#include "fitsim/nn/params.hpp"

namespace fitsim::nn {

// Binary checkpoint format (little-endian):
//   magic "FSNN", u32 version, u64 tensor count,
//   per tensor: u64 name length, name bytes, u64 rows, u64 cols,
//   then all values as raw f64 in layout order.
// Round-trips are bit-exact: load(save(p)) == p for every byte pattern,
// including -0.0 and subnormals.
void save_checkpoint(const ParamVector& params, const std::string& path);

ParamVector load_checkpoint(const std::string& path);

}  // namespace fitsim::nn
