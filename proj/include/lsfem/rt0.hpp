#pragma once

#include <vector>

#include "lsfem/geometry.hpp"
#include "lsfem/mesh.hpp"

namespace lsfem {

/// Lowest-order Raviart-Thomas field: one value per edge, the integrated
/// normal flux through the edge along its global normal.
struct FluxField {
  int mesh_generation = 0;
  std::vector<double> dofs;
};

/// Piecewise-constant field, one value per element.
struct ScalarField {
  int mesh_generation = 0;
  std::vector<double> values;
};

/// sign_i (x - p_i) / (2 |K|), with p_i the vertex opposite local edge i.
Vec2 rt0_basis_value(const Mesh& mesh, const Element& element, int local_edge, Vec2 x);

/// sign_i / |K|.
double rt0_div(const Element& element, int local_edge);

/// Throws FieldError unless the field is bound to this mesh.
void check_binding(const FluxField& field, const Mesh& mesh);
void check_binding(const ScalarField& field, const Mesh& mesh);

Vec2 eval_flux(const FluxField& field, const Mesh& mesh, Index element, Vec2 x);
double eval_flux_div(const FluxField& field, const Mesh& mesh, Index element);

/// Edge dofs from the 5-point Gauss rule applied to sigma . n.
FluxField interpolate_rt0(const Mesh& mesh, const VectorFn& sigma);

}  // namespace lsfem
