#include "support.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "lsfem/assembly.hpp"
#include "lsfem/quadrature.hpp"
#include "lsfem/rt0.hpp"
#include "lsfem/solver.hpp"

namespace lsfem::testing {

Mesh single_triangle(Vec2 a, Vec2 b, Vec2 c) {
  const std::vector<Vec2> v{a, b, c};
  const std::vector<std::array<Index, 3>> t{{0, 1, 2}};
  return build_mesh(v, t);
}

Mesh two_triangle_square() {
  const std::vector<Vec2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<Index, 3>> t{{0, 1, 2}, {0, 2, 3}};
  return build_mesh(v, t);
}

std::string conformity_violation(const Mesh& mesh) {
  std::ostringstream why;
  std::map<std::pair<Index, Index>, std::vector<Index>> owners;
  for (const Element& el : mesh.elements()) {
    if (signed_area2(mesh.vertex(el.vertices[0]).pos, mesh.vertex(el.vertices[1]).pos,
                     mesh.vertex(el.vertices[2]).pos) <= 0.0) {
      why << "element " << el.id << " is not counterclockwise";
      return why.str();
    }
    for (int i = 0; i < 3; ++i) {
      Index a = el.vertices[static_cast<std::size_t>((i + 1) % 3)];
      Index b = el.vertices[static_cast<std::size_t>((i + 2) % 3)];
      owners[std::minmax(a, b)].push_back(el.id);
    }
  }
  for (const auto& [key, els] : owners) {
    if (els.size() > 2) {
      why << "edge (" << key.first << "," << key.second << ") has " << els.size() << " owners";
      return why.str();
    }
  }
  // A hanging node is a vertex lying strictly inside some element edge.
  for (const auto& [key, els] : owners) {
    const Vec2 p = mesh.vertex(key.first).pos;
    const Vec2 q = mesh.vertex(key.second).pos;
    for (const Vertex& v : mesh.vertices()) {
      if (v.id == key.first || v.id == key.second) continue;
      const double len = norm(q - p);
      if (std::abs(cross(q - p, v.pos - p)) > 1e-12 * len * len) continue;
      const double t = dot(v.pos - p, q - p) / (len * len);
      if (t > 1e-12 && t < 1.0 - 1e-12) {
        why << "vertex " << v.id << " hangs on edge (" << key.first << "," << key.second << ")";
        return why.str();
      }
    }
  }
  if (static_cast<std::size_t>(mesh.num_edges()) != owners.size()) {
    why << "edge table has " << mesh.num_edges() << " edges, topology has " << owners.size();
    return why.str();
  }
  for (const Edge& e : mesh.edges()) {
    const auto& els = owners.at(std::minmax(e.endpoints[0], e.endpoints[1]));
    const bool boundary = els.size() == 1;
    if (boundary != e.is_boundary()) {
      why << "edge " << e.id << " has the wrong boundary flag";
      return why.str();
    }
    if (!boundary && e.bclass != BoundaryClass::interior) {
      why << "interior edge " << e.id << " carries a boundary class";
      return why.str();
    }
  }
  return {};
}

double edge_flux_of_basis(const Mesh& mesh, Index element, int basis, int edge) {
  const Element& el = mesh.element(element);
  const Edge& e = mesh.edge(el.edges[static_cast<std::size_t>(edge)]);
  const GaussRule1D& rule = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const Vec2 x = mesh.edge_point(e.id, rule.nodes[q]);
    s += rule.weights[q] * dot(rt0_basis_value(mesh, el, basis, x), e.unit_normal);
  }
  return s * e.length;
}

std::vector<Mesh> adaptive_meshes(const ProblemSpec& problem, int generations, double theta) {
  std::vector<Mesh> out{initial_mesh(problem)};
  for (int k = 0; k < generations; ++k) {
    const Mesh& m = out.back();
    const Solved s = solve(m, problem);
    const IndicatorField ind = indicators(s.flux, m, problem, Formulation::ls1, 4);
    out.push_back(classify_boundary(bisect(m, dorfler_mark(ind, theta)), problem.beta));
  }
  return out;
}

Solved solve(const Mesh& mesh, const ProblemSpec& problem, Formulation f, Recovery r) {
  const LinearSystem sys = assemble(mesh, problem, f);
  Solved out;
  out.flux = solve_spd(sys, SolverMethod::direct).flux;
  out.u = recover_u(out.flux, mesh, problem, r);
  return out;
}

Vec2 random_point(const Triangle& t, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(0.02, 0.98);
  double a = d(rng);
  double b = d(rng);
  if (a + b > 0.98) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  a = std::clamp(a, 0.01, 0.98);
  b = std::clamp(b, 0.01, 0.99 - a);
  return t[0] + a * (t[1] - t[0]) + b * (t[2] - t[0]);
}

}  // namespace lsfem::testing
