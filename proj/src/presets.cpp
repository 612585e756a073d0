#include "wulff/presets.hpp"

#include <cmath>

namespace wulff {

CrystalNorm preset_cube() {
  std::vector<Vec> sigmas;
  for (int axis = 0; axis < 3; ++axis)
    for (int sign = 1; sign >= -1; sign -= 2) {
      Vec s(0, 0, 0);
      s[axis] = sign;
      sigmas.push_back(s);
    }
  std::vector<Vec> corners;
  for (int i = 0; i < 8; ++i)
    corners.emplace_back(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1);
  return CrystalNorm(3, std::move(sigmas), std::move(corners));
}

CrystalNorm preset_octahedron_dual() {
  std::vector<Vec> sigmas;
  for (int i = 0; i < 8; ++i)
    sigmas.emplace_back(i & 1 ? -1 : 1, i & 2 ? -1 : 1, i & 4 ? -1 : 1);
  std::vector<Vec> tips = {Vec(1, 0, 0),  Vec(-1, 0, 0), Vec(0, 1, 0),
                           Vec(0, -1, 0), Vec(0, 0, 1),  Vec(0, 0, -1)};
  return CrystalNorm(3, std::move(sigmas), std::move(tips));
}

CrystalNorm preset_hexagon() {
  std::vector<Vec> sigmas;
  for (int k = 0; k < 6; ++k) {
    double ang = k * 3.14159265358979323846 / 3.0;
    sigmas.emplace_back(std::cos(ang), std::sin(ang), 0.0);
  }
  return CrystalNorm(2, std::move(sigmas));
}

CrystalNorm preset_square_pyramid() {
  // Apex (0,0,1), base corners (+-1, +-1, -1/2); each sigma solves the
  // facet-plane equations sigma . v = 1 for that facet's vertices.
  std::vector<Vec> sigmas = {Vec(1.5, 0, 1), Vec(-1.5, 0, 1), Vec(0, 1.5, 1),
                             Vec(0, -1.5, 1), Vec(0, 0, -2)};
  std::vector<Vec> verts = {Vec(0, 0, 1), Vec(1, 1, -0.5), Vec(1, -1, -0.5),
                            Vec(-1, 1, -0.5), Vec(-1, -1, -0.5)};
  return CrystalNorm(3, std::move(sigmas), std::move(verts));
}

std::vector<std::string> preset_names() {
  return {"cube", "octahedron-dual", "hexagon", "square-pyramid"};
}

std::optional<CrystalNorm> preset_by_name(const std::string& name) {
  if (name == "cube") return preset_cube();
  if (name == "octahedron-dual") return preset_octahedron_dual();
  if (name == "hexagon") return preset_hexagon();
  if (name == "square-pyramid") return preset_square_pyramid();
  return std::nullopt;
}

}  // namespace wulff
