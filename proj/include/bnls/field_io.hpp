#pragma once

#include <string>

#include "bnls/radial_grid.hpp"

namespace bnls {

/// Text field format: header "# N=<int> R=<float> M=<int>",
/// then M lines "r_i value_i" in full double precision.
void write_field(const std::string& path, const RadialField& field);
RadialField read_field(const std::string& path);

} // namespace bnls
