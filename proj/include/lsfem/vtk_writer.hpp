#pragma once

#include <iosfwd>

#include "lsfem/mesh.hpp"
#include "lsfem/rt0.hpp"

namespace lsfem {

/// Legacy ASCII unstructured grid with optional P0 cell fields u_h and eta.
void write_vtk(std::ostream& out, const Mesh& mesh, const ScalarField* u = nullptr,
               const std::vector<double>* eta = nullptr);

}  // namespace lsfem
