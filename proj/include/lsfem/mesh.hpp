#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "lsfem/geometry.hpp"

namespace lsfem {

inline constexpr Index kNone = -1;
inline constexpr int kNoGeometry = -1;

enum class BoundaryClass : std::uint8_t { interior, inflow, outflow, characteristic };

std::string_view to_string(BoundaryClass c);

struct Vertex {
  Index id = kNone;
  Vec2 pos;
  bool on_boundary = false;
  int geometry_tag = kNoGeometry;
};

/// Mesh edge. The global normal is outward on the boundary; on interior
/// edges it points out of adjacent[0], the lower-id element.
struct Edge {
  Index id = kNone;
  std::array<Index, 2> endpoints{kNone, kNone};
  std::array<Index, 2> adjacent{kNone, kNone};
  Vec2 unit_normal;
  double length = 0.0;
  BoundaryClass bclass = BoundaryClass::interior;
  int geometry_tag = kNoGeometry;

  bool is_boundary() const { return adjacent[1] == kNone; }
};

/// Counterclockwise triangle. Local edge i is opposite local vertex i and
/// signs[i] is +1 when the global normal of that edge points out of this
/// element.
struct Element {
  Index id = kNone;
  std::array<Index, 3> vertices{kNone, kNone, kNone};
  std::array<Index, 3> edges{kNone, kNone, kNone};
  std::array<int, 3> signs{1, 1, 1};
  double area = 0.0;
  double diameter = 0.0;
  int refinement_edge = 0;
};

using Projection = std::function<Vec2(Vec2)>;
using GeometryHooks = std::map<int, Projection>;

inline constexpr int kUnitCircleArc = 1;

/// Radial projection onto the unit circle; points already on it are returned
/// unchanged.
Vec2 project_to_unit_circle(Vec2 p);

struct TaggedEdge {
  Index a = kNone;
  Index b = kNone;
  int tag = kNoGeometry;
};

/// Everything needed to construct a mesh besides coordinates and triangles.
struct MeshAttributes {
  std::vector<int> vertex_tags;          // empty or one per vertex
  std::vector<TaggedEdge> edge_tags;     // boundary edges on curved geometry
  GeometryHooks hooks;
  int generation = 0;
  std::vector<Index> parents;            // empty or one per triangle
  std::vector<std::pair<std::array<Index, 2>, BoundaryClass>> edge_classes;
};

class Mesh {
 public:
  Mesh() = default;

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Element> elements() const { return elements_; }
  const Vertex& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Edge& edge(Index i) const { return edges_[static_cast<std::size_t>(i)]; }
  const Element& element(Index i) const { return elements_[static_cast<std::size_t>(i)]; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }

  int generation() const { return generation_; }
  const GeometryHooks& geometry_hooks() const { return hooks_; }

  /// Id of the element in the previous generation each element descends from
  /// (its own id for generation 0).
  std::span<const Index> parents() const { return parents_; }

  Triangle corners(Index element) const;
  Vec2 centroid(Index element) const;
  Vec2 edge_midpoint(Index edge) const;
  Vec2 edge_point(Index edge, double t) const;

  double total_area() const;
  double h_max() const;
  /// Smallest interior angle over all elements, in radians.
  double min_angle() const;

 private:
  friend Mesh build_mesh(std::span<const Vec2>, std::span<const std::array<Index, 3>>,
                         MeshAttributes);
  friend Mesh classify_boundary(const Mesh&, const VectorFn&, double);

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Element> elements_;
  std::vector<Index> parents_;
  GeometryHooks hooks_;
  int generation_ = 0;
};

/// Builds edges, adjacency, orientation signs and geometric data. Input
/// triangles may have either orientation.
Mesh build_mesh(std::span<const Vec2> vertices, std::span<const std::array<Index, 3>> triangles,
                MeshAttributes attributes = {});

/// Labels boundary edges by the sign of beta . n at the edge midpoint,
/// with threshold tol * |beta(midpoint)|.
Mesh classify_boundary(const Mesh& mesh, const VectorFn& beta, double tol = 1e-12);

/// Longest-edge bisection of the marked elements with recursive closure
/// (longest-edge propagation path), followed by boundary snapping.
Mesh bisect(const Mesh& mesh, std::span<const Index> marked);

/// Two rounds of bisection of every element.
Mesh uniform_refine(const Mesh& mesh);

/// Projects every vertex carrying a geometry tag with a registered hook.
Mesh snap_boundary(const Mesh& mesh);

/// Plain-text mesh format: "tmesh 1", then "v x y" and "t i j k" lines.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace lsfem
