#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wulff/crystal.hpp"

namespace wulff {

// Shipped norms: cube and octahedron-dual (3-d), hexagon (2-d), and the
// square pyramid whose lateral-face offsets split the apex.
CrystalNorm preset_cube();
CrystalNorm preset_octahedron_dual();
CrystalNorm preset_hexagon();
CrystalNorm preset_square_pyramid();

std::vector<std::string> preset_names();
std::optional<CrystalNorm> preset_by_name(const std::string& name);

}  // namespace wulff
