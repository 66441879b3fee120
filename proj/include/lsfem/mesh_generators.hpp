#pragma once

#include <string_view>

#include "lsfem/mesh.hpp"

namespace lsfem {

struct MeshParams {
  int n = 4;              // aligned_square: squares per side
  double h = 1.0 / 6.0;   // peterson: strip width
};

/// (0,1)^2 split into n x n squares, each cut by the diagonal parallel to y = x.
Mesh aligned_square(int n);

/// (0,2) x (0,1) with vertices at (pi/3, 0) and (1, 1) joined by an edge.
Mesh split_rectangle();

/// Peterson-type mesh on (0,1)^2: horizontal strips of height h whose
/// bounding lines carry nodes shifted by h/2 on alternate lines.
Mesh peterson(double h);

/// Upper half of the unit disk; arc edges are tagged for radial snapping.
Mesh half_disk();

/// Dispatch by name: aligned_square, split_rectangle, peterson, half_disk.
Mesh generate_initial_mesh(std::string_view name, const MeshParams& params = {});

}  // namespace lsfem
