#pragma once

#include <string>

#include "dgner/model.hpp"

namespace dgner {

// Single binary file: magic + format version, the model configuration, all
// four vocabulary tables in id order, then every parameter tensor sorted by
// name with shape and raw little-endian float64 payload. save then load
// reproduces values bit-for-bit.
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace dgner
