#include "lsfem/vtk_writer.hpp"

#include <ostream>

#include "lsfem/error.hpp"

namespace lsfem {

void write_vtk(std::ostream& out, const Mesh& mesh, const ScalarField* u, const std::vector<double>* eta) {
  if (u) check_binding(*u, mesh);
  if (eta && eta->size() != static_cast<std::size_t>(mesh.num_elements())) {
    throw FieldError("indicator field does not match the mesh");
  }
  const auto old_precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "lsfem generation " << mesh.generation() << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vertex& v : mesh.vertices()) out << v.pos.x << ' ' << v.pos.y << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
  for (const Element& e : mesh.elements()) {
    out << "3 " << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.vertices[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (Index k = 0; k < mesh.num_elements(); ++k) out << "5\n";
  if (u || eta) out << "CELL_DATA " << mesh.num_elements() << '\n';
  if (u) {
    out << "SCALARS u_h double 1\nLOOKUP_TABLE default\n";
    for (double v : u->values) out << v << '\n';
  }
  if (eta) {
    out << "SCALARS eta double 1\nLOOKUP_TABLE default\n";
    for (double v : *eta) out << v << '\n';
  }
  out.precision(old_precision);
}

}  // namespace lsfem
