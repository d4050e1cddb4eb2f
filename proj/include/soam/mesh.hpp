#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "soam/geometry.hpp"

namespace soam {

/// Indexed triangle mesh. Segments carry 1-dimensional complexes (curves).
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::array<std::uint32_t, 2>> segments;
};

}  // namespace soam
