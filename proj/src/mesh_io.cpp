#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lsfem/error.hpp"
#include "lsfem/mesh.hpp"

namespace lsfem {

namespace {

std::string format_coordinate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "tmesh 1\n";
  for (const Vertex& v : mesh.vertices()) {
    out << "v " << format_coordinate(v.pos.x) << ' ' << format_coordinate(v.pos.y) << '\n';
  }
  for (const Element& e : mesh.elements()) {
    out << "t " << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.vertices[2] << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("tmesh 1", 0) != 0) {
    throw MeshError("read_mesh: missing 'tmesh 1' header");
  }
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "v") {
      Vec2 p;
      ls >> p.x >> p.y;
      if (!ls) throw MeshError("read_mesh: malformed vertex on line " + std::to_string(line_no));
      vertices.push_back(p);
    } else if (kind == "t") {
      std::array<Index, 3> t{};
      ls >> t[0] >> t[1] >> t[2];
      if (!ls) throw MeshError("read_mesh: malformed triangle on line " + std::to_string(line_no));
      triangles.push_back(t);
    } else {
      throw MeshError("read_mesh: unknown record '" + kind + "' on line " + std::to_string(line_no));
    }
  }
  return build_mesh(vertices, triangles);
}

}  // namespace lsfem
