#include "lsfem/rt0.hpp"

#include <string>

#include "lsfem/error.hpp"
#include "lsfem/quadrature.hpp"

namespace lsfem {

Vec2 rt0_basis_value(const Mesh& mesh, const Element& element, int local_edge, Vec2 x) {
  const Vec2 p = mesh.vertex(element.vertices[static_cast<std::size_t>(local_edge)]).pos;
  return (element.signs[static_cast<std::size_t>(local_edge)] / (2.0 * element.area)) * (x - p);
}

double rt0_div(const Element& element, int local_edge) {
  return element.signs[static_cast<std::size_t>(local_edge)] / element.area;
}

void check_binding(const FluxField& field, const Mesh& mesh) {
  if (field.mesh_generation != mesh.generation() ||
      field.dofs.size() != static_cast<std::size_t>(mesh.num_edges())) {
    throw FieldError("flux field (generation " + std::to_string(field.mesh_generation) + ", " +
                     std::to_string(field.dofs.size()) + " dofs) is not bound to mesh generation " +
                     std::to_string(mesh.generation()) + " with " + std::to_string(mesh.num_edges()) +
                     " edges");
  }
}

void check_binding(const ScalarField& field, const Mesh& mesh) {
  if (field.mesh_generation != mesh.generation() ||
      field.values.size() != static_cast<std::size_t>(mesh.num_elements())) {
    throw FieldError("scalar field is not bound to mesh generation " + std::to_string(mesh.generation()));
  }
}

Vec2 eval_flux(const FluxField& field, const Mesh& mesh, Index element, Vec2 x) {
  check_binding(field, mesh);
  const Element& el = mesh.element(element);
  Vec2 v;
  for (int i = 0; i < 3; ++i) {
    v += field.dofs[static_cast<std::size_t>(el.edges[static_cast<std::size_t>(i)])] *
         rt0_basis_value(mesh, el, i, x);
  }
  return v;
}

double eval_flux_div(const FluxField& field, const Mesh& mesh, Index element) {
  check_binding(field, mesh);
  const Element& el = mesh.element(element);
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    d += field.dofs[static_cast<std::size_t>(el.edges[static_cast<std::size_t>(i)])] * rt0_div(el, i);
  }
  return d;
}

FluxField interpolate_rt0(const Mesh& mesh, const VectorFn& sigma) {
  const GaussRule1D& g = gauss_legendre(5);
  FluxField f;
  f.mesh_generation = mesh.generation();
  f.dofs.resize(static_cast<std::size_t>(mesh.num_edges()));
  for (const Edge& e : mesh.edges()) {
    double s = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      s += g.weights[q] * dot(sigma(mesh.edge_point(e.id, g.nodes[q])), e.unit_normal);
    }
    f.dofs[static_cast<std::size_t>(e.id)] = s * e.length;
  }
  return f;
}

}  // namespace lsfem
