#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ironic/nn/graph.hpp"

namespace ironic::nn {

// Binary checkpoint: magic, tensor count, then per tensor a name, shape
// header, and little-endian float64 payload in row-major order. A text
// manifest listing every tensor is written next to it at "<path>.manifest".
void save_checkpoint(const std::string& path, const ParameterSet& params);

// Raw contents in file order, independent of any model.
std::vector<std::pair<std::string, Matrix>> load_checkpoint_raw(const std::string& path);

// Fills an existing ParameterSet. The file must contain exactly the same
// tensor names with the same shapes; anything else is an error that names
// the offending tensor.
void load_checkpoint(const std::string& path, ParameterSet& params);

}  // namespace ironic::nn
