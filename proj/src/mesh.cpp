#include "lsfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Squared lengths are compared after truncating the mantissa to 40 bits so
// that lengths equal up to rounding fall through to the id tie-break while
// the comparison stays a strict total order.
double quantized(double v) {
  int e = 0;
  double m = std::frexp(v, &e);
  m = std::floor(std::ldexp(m, 40));
  return std::ldexp(m, e - 40);
}

bool outranks(double len2_a, Index a0, Index a1, double len2_b, Index b0, Index b1) {
  const double qa = quantized(len2_a);
  const double qb = quantized(len2_b);
  if (qa != qb) return qa > qb;
  return std::minmax(a0, a1) < std::minmax(b0, b1);
}

int longest_local_edge(const std::array<Vec2, 3>& p, const std::array<Index, 3>& v) {
  int best = 0;
  double best_len2 = norm2(p[2] - p[1]);
  for (int i = 1; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const double len2 = norm2(p[k] - p[j]);
    const int bj = (best + 1) % 3;
    const int bk = (best + 2) % 3;
    if (outranks(len2, v[j], v[k], best_len2, v[bj], v[bk])) {
      best = i;
      best_len2 = len2;
    }
  }
  return best;
}

std::vector<std::array<Index, 3>> triangles_of(const Mesh& mesh) {
  std::vector<std::array<Index, 3>> tris;
  tris.reserve(static_cast<std::size_t>(mesh.num_elements()));
  for (const Element& e : mesh.elements()) tris.push_back(e.vertices);
  return tris;
}

std::vector<Vec2> positions_of(const Mesh& mesh) {
  std::vector<Vec2> pos;
  pos.reserve(static_cast<std::size_t>(mesh.num_vertices()));
  for (const Vertex& v : mesh.vertices()) pos.push_back(v.pos);
  return pos;
}

MeshAttributes attributes_of(const Mesh& mesh) {
  MeshAttributes attr;
  attr.vertex_tags.reserve(static_cast<std::size_t>(mesh.num_vertices()));
  for (const Vertex& v : mesh.vertices()) attr.vertex_tags.push_back(v.geometry_tag);
  for (const Edge& e : mesh.edges()) {
    if (!e.is_boundary()) continue;
    if (e.geometry_tag != kNoGeometry) {
      attr.edge_tags.push_back({e.endpoints[0], e.endpoints[1], e.geometry_tag});
    }
    if (e.bclass != BoundaryClass::interior) {
      attr.edge_classes.push_back({e.endpoints, e.bclass});
    }
  }
  attr.hooks = mesh.geometry_hooks();
  attr.generation = mesh.generation();
  attr.parents.assign(mesh.parents().begin(), mesh.parents().end());
  return attr;
}

void check_orientation(std::span<const Vec2> pos, std::span<const std::array<Index, 3>> tris,
                       const char* what) {
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const auto& t = tris[k];
    if (signed_area2(pos[t[0]], pos[t[1]], pos[t[2]]) <= 0.0) {
      throw MeshError(std::string(what) + ": element " + std::to_string(k) + " became inverted");
    }
  }
}

// Mutable triangulation used while bisecting. Edges are keyed by their sorted
// vertex pair.
class Refiner {
 public:
  explicit Refiner(const Mesh& mesh) : hooks_(mesh.geometry_hooks()), generation_(mesh.generation()) {
    pos_ = positions_of(mesh);
    vtag_.reserve(pos_.size());
    for (const Vertex& v : mesh.vertices()) vtag_.push_back(v.geometry_tag);
    tris_ = triangles_of(mesh);
    parent_.resize(tris_.size());
    for (std::size_t k = 0; k < tris_.size(); ++k) parent_[k] = static_cast<Index>(k);
    alive_.assign(tris_.size(), 1);
    edges_.reserve(static_cast<std::size_t>(mesh.num_edges()) * 2);
    for (const Edge& e : mesh.edges()) {
      Slot s;
      s.tris = e.adjacent;
      s.tag = e.geometry_tag;
      s.bclass = e.bclass;
      edges_.emplace(edge_key(e.endpoints[0], e.endpoints[1]), s);
    }
  }

  void refine(Index t) {
    while (alive_[static_cast<std::size_t>(t)]) {
      Index cur = t;
      for (std::size_t guard = 0;; ++guard) {
        if (guard > tris_.size()) throw MeshError("bisect: longest-edge path did not terminate");
        const auto [a, b] = refinement_edge(cur);
        const std::uint64_t key = edge_key(a, b);
        const Slot& slot = edges_.at(key);
        const Index nb = slot.tris[0] == cur ? slot.tris[1] : slot.tris[0];
        if (nb == kNone) {
          split_edge(a, b);
          break;
        }
        const auto [c, d] = refinement_edge(nb);
        if (edge_key(c, d) == key) {
          split_edge(a, b);
          break;
        }
        cur = nb;
      }
    }
  }

  Mesh finish() && {
    std::vector<std::array<Index, 3>> tris;
    MeshAttributes attr;
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      if (!alive_[k]) continue;
      tris.push_back(tris_[k]);
      attr.parents.push_back(parent_[k]);
    }
    check_orientation(pos_, tris, "bisect");
    attr.vertex_tags = vtag_;
    for (const auto& [key, slot] : edges_) {
      if (slot.tris[1] != kNone) continue;
      const auto a = static_cast<Index>(key >> 32);
      const auto b = static_cast<Index>(key & 0xffffffffu);
      if (slot.tag != kNoGeometry) attr.edge_tags.push_back({a, b, slot.tag});
      if (slot.bclass != BoundaryClass::interior) attr.edge_classes.push_back({{a, b}, slot.bclass});
    }
    attr.hooks = hooks_;
    attr.generation = generation_ + 1;
    return build_mesh(pos_, tris, std::move(attr));
  }

 private:
  struct Slot {
    std::array<Index, 2> tris{kNone, kNone};
    int tag = kNoGeometry;
    BoundaryClass bclass = BoundaryClass::interior;

    void replace(Index from, Index to) {
      if (tris[0] == from) {
        tris[0] = to;
      } else if (tris[1] == from) {
        tris[1] = to;
      }
    }
    void add(Index t) {
      if (tris[0] == kNone) {
        tris[0] = t;
      } else {
        tris[1] = t;
      }
    }
  };

  std::pair<Index, Index> refinement_edge(Index t) const {
    const auto& v = tris_[static_cast<std::size_t>(t)];
    const std::array<Vec2, 3> p{pos_[v[0]], pos_[v[1]], pos_[v[2]]};
    const int i = longest_local_edge(p, v);
    return {v[(i + 1) % 3], v[(i + 2) % 3]};
  }

  void split_edge(Index a, Index b) {
    const std::uint64_t key = edge_key(a, b);
    const Slot old = edges_.at(key);
    edges_.erase(key);

    Vec2 mid = 0.5 * (pos_[a] + pos_[b]);
    int tag = kNoGeometry;
    if (old.tris[1] == kNone && old.tag != kNoGeometry) {
      tag = old.tag;
      if (auto it = hooks_.find(tag); it != hooks_.end()) mid = it->second(mid);
    }
    const auto m = static_cast<Index>(pos_.size());
    pos_.push_back(mid);
    vtag_.push_back(tag);

    Slot& am = edges_[edge_key(a, m)];
    Slot& mb = edges_[edge_key(m, b)];
    am.tag = mb.tag = old.tag;
    am.bclass = mb.bclass = old.bclass;

    for (const Index t : old.tris) {
      if (t == kNone) continue;
      const auto v = tris_[static_cast<std::size_t>(t)];
      int k = 0;
      while (v[k] == a || v[k] == b) ++k;
      const Index c = v[k];
      const Index p = v[(k + 1) % 3];
      const Index q = v[(k + 2) % 3];
      const auto t1 = static_cast<Index>(tris_.size());
      const Index t2 = t1 + 1;
      tris_.push_back({c, p, m});
      tris_.push_back({c, m, q});
      const Index root = parent_[static_cast<std::size_t>(t)];
      parent_.push_back(root);
      parent_.push_back(root);
      alive_.push_back(1);
      alive_.push_back(1);
      alive_[static_cast<std::size_t>(t)] = 0;

      edges_.at(edge_key(c, p)).replace(t, t1);
      edges_.at(edge_key(c, q)).replace(t, t2);
      Slot& cm = edges_[edge_key(c, m)];
      cm.tris = {t1, t2};
      edges_.at(edge_key(p, m)).add(t1);
      edges_.at(edge_key(m, q)).add(t2);
    }
  }

  std::vector<Vec2> pos_;
  std::vector<int> vtag_;
  std::vector<std::array<Index, 3>> tris_;
  std::vector<Index> parent_;
  std::vector<char> alive_;
  std::unordered_map<std::uint64_t, Slot> edges_;
  const GeometryHooks& hooks_;
  int generation_;
};

}  // namespace

std::string_view to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::interior: return "interior";
    case BoundaryClass::inflow: return "inflow";
    case BoundaryClass::outflow: return "outflow";
    case BoundaryClass::characteristic: return "characteristic";
  }
  return "unknown";
}

Vec2 project_to_unit_circle(Vec2 p) {
  const double r = norm(p);
  if (r == 0.0) throw MeshError("cannot project the origin onto the unit circle");
  if (std::abs(r - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) return p;
  return p / r;
}

Triangle Mesh::corners(Index element) const {
  const auto& v = elements_[static_cast<std::size_t>(element)].vertices;
  return {vertices_[v[0]].pos, vertices_[v[1]].pos, vertices_[v[2]].pos};
}

Vec2 Mesh::centroid(Index element) const { return lsfem::centroid(corners(element)); }

Vec2 Mesh::edge_midpoint(Index edge) const { return edge_point(edge, 0.5); }

Vec2 Mesh::edge_point(Index edge, double t) const {
  const Edge& e = edges_[static_cast<std::size_t>(edge)];
  const Vec2 a = vertices_[e.endpoints[0]].pos;
  const Vec2 b = vertices_[e.endpoints[1]].pos;
  return a + t * (b - a);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (const Element& e : elements_) sum += e.area;
  return sum;
}

double Mesh::h_max() const {
  double h = 0.0;
  for (const Element& e : elements_) h = std::max(h, e.diameter);
  return h;
}

double Mesh::min_angle() const {
  double best = std::numbers::pi;
  for (Index k = 0; k < num_elements(); ++k) {
    const Triangle t = corners(k);
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = t[(i + 1) % 3] - t[i];
      const Vec2 w = t[(i + 2) % 3] - t[i];
      best = std::min(best, std::atan2(std::abs(cross(u, w)), dot(u, w)));
    }
  }
  return best;
}

Mesh build_mesh(std::span<const Vec2> vertices, std::span<const std::array<Index, 3>> triangles,
                MeshAttributes attributes) {
  const auto nv = static_cast<Index>(vertices.size());
  if (!attributes.vertex_tags.empty() && attributes.vertex_tags.size() != vertices.size()) {
    throw MeshError("build_mesh: vertex tag count does not match vertex count");
  }
  if (!attributes.parents.empty() && attributes.parents.size() != triangles.size()) {
    throw MeshError("build_mesh: parent count does not match triangle count");
  }

  Mesh mesh;
  mesh.vertices_.resize(vertices.size());
  for (Index i = 0; i < nv; ++i) {
    const Vec2 p = vertices[static_cast<std::size_t>(i)];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw MeshError("build_mesh: vertex " + std::to_string(i) + " has non-finite coordinates");
    }
    Vertex& v = mesh.vertices_[static_cast<std::size_t>(i)];
    v.id = i;
    v.pos = p;
    if (!attributes.vertex_tags.empty()) v.geometry_tag = attributes.vertex_tags[static_cast<std::size_t>(i)];
  }

  std::set<std::array<Index, 3>> seen;
  mesh.elements_.resize(triangles.size());
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto t = triangles[k];
    for (const Index v : t) {
      if (v < 0 || v >= nv) {
        throw MeshError("build_mesh: triangle " + std::to_string(k) + " references vertex " +
                        std::to_string(v) + " out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("build_mesh: triangle " + std::to_string(k) + " repeats a vertex");
    }
    auto sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (!seen.insert(sorted).second) {
      throw MeshError("build_mesh: duplicate triangle " + std::to_string(k));
    }
    const Vec2 a = vertices[t[0]];
    const Vec2 b = vertices[t[1]];
    const Vec2 c = vertices[t[2]];
    const double scale = std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
    double a2 = signed_area2(a, b, c);
    if (std::abs(a2) <= 1e-14 * scale) {
      throw MeshError("build_mesh: triangle " + std::to_string(k) + " has zero area");
    }
    if (a2 < 0.0) {
      std::swap(t[1], t[2]);
      a2 = -a2;
    }
    Element& el = mesh.elements_[k];
    el.id = static_cast<Index>(k);
    el.vertices = t;
    el.area = 0.5 * a2;
    el.diameter = std::sqrt(scale);
    const std::array<Vec2, 3> p{vertices[t[0]], vertices[t[1]], vertices[t[2]]};
    el.refinement_edge = longest_local_edge(p, t);
  }

  std::unordered_map<std::uint64_t, Index> edge_index;
  edge_index.reserve(triangles.size() * 2);
  for (Element& el : mesh.elements_) {
    for (int i = 0; i < 3; ++i) {
      const Index a = el.vertices[(i + 1) % 3];
      const Index b = el.vertices[(i + 2) % 3];
      const std::uint64_t key = edge_key(a, b);
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<Index>(mesh.edges_.size()));
      if (inserted) {
        Edge e;
        e.id = it->second;
        e.endpoints = {a, b};
        e.adjacent = {el.id, kNone};
        mesh.edges_.push_back(e);
        el.edges[i] = e.id;
        el.signs[i] = 1;
        continue;
      }
      Edge& e = mesh.edges_[static_cast<std::size_t>(it->second)];
      if (e.adjacent[1] != kNone) {
        throw MeshError("build_mesh: edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") is shared by more than two triangles");
      }
      if (e.endpoints[0] != b || e.endpoints[1] != a) {
        throw MeshError("build_mesh: triangles " + std::to_string(e.adjacent[0]) + " and " +
                        std::to_string(el.id) + " overlap");
      }
      e.adjacent[1] = el.id;
      el.edges[i] = e.id;
      el.signs[i] = -1;
    }
  }

  for (Edge& e : mesh.edges_) {
    const Vec2 d = mesh.vertices_[e.endpoints[1]].pos - mesh.vertices_[e.endpoints[0]].pos;
    e.length = norm(d);
    e.unit_normal = Vec2{d.y, -d.x} / e.length;
    if (e.is_boundary()) {
      mesh.vertices_[e.endpoints[0]].on_boundary = true;
      mesh.vertices_[e.endpoints[1]].on_boundary = true;
    }
  }

  for (const TaggedEdge& te : attributes.edge_tags) {
    auto it = edge_index.find(edge_key(te.a, te.b));
    if (it == edge_index.end()) continue;
    Edge& e = mesh.edges_[static_cast<std::size_t>(it->second)];
    if (e.is_boundary()) e.geometry_tag = te.tag;
  }
  for (const auto& [ends, cls] : attributes.edge_classes) {
    auto it = edge_index.find(edge_key(ends[0], ends[1]));
    if (it == edge_index.end()) continue;
    Edge& e = mesh.edges_[static_cast<std::size_t>(it->second)];
    if (e.is_boundary()) e.bclass = cls;
  }

  if (attributes.parents.empty()) {
    mesh.parents_.resize(triangles.size());
    for (std::size_t k = 0; k < triangles.size(); ++k) mesh.parents_[k] = static_cast<Index>(k);
  } else {
    mesh.parents_ = std::move(attributes.parents);
  }
  mesh.hooks_ = std::move(attributes.hooks);
  mesh.generation_ = attributes.generation;
  return mesh;
}

Mesh classify_boundary(const Mesh& mesh, const VectorFn& beta, double tol) {
  Mesh out = mesh;
  for (Edge& e : out.edges_) {
    if (!e.is_boundary()) {
      e.bclass = BoundaryClass::interior;
      continue;
    }
    const Vec2 mid = mesh.edge_midpoint(e.id);
    const Vec2 b = beta(mid);
    if (!std::isfinite(b.x) || !std::isfinite(b.y)) {
      throw MeshError("classify_boundary: advection field not finite at edge " + std::to_string(e.id));
    }
    const double bn = dot(b, e.unit_normal);
    const double threshold = tol * norm(b);
    if (bn < -threshold) {
      e.bclass = BoundaryClass::inflow;
    } else if (bn > threshold) {
      e.bclass = BoundaryClass::outflow;
    } else {
      e.bclass = BoundaryClass::characteristic;
    }
  }
  return out;
}

Mesh bisect(const Mesh& mesh, std::span<const Index> marked) {
  for (const Index k : marked) {
    if (k < 0 || k >= mesh.num_elements()) {
      throw MeshError("bisect: marked element " + std::to_string(k) + " out of range");
    }
  }
  Refiner refiner(mesh);
  for (const Index k : marked) refiner.refine(k);
  return std::move(refiner).finish();
}

Mesh uniform_refine(const Mesh& mesh) {
  auto all = [](const Mesh& m) {
    std::vector<Index> ids(static_cast<std::size_t>(m.num_elements()));
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<Index>(k);
    return ids;
  };
  const Mesh once = bisect(mesh, all(mesh));
  return bisect(once, all(once));
}

Mesh snap_boundary(const Mesh& mesh) {
  std::vector<Vec2> pos = positions_of(mesh);
  const GeometryHooks& hooks = mesh.geometry_hooks();
  for (const Vertex& v : mesh.vertices()) {
    if (v.geometry_tag == kNoGeometry) continue;
    if (auto it = hooks.find(v.geometry_tag); it != hooks.end()) {
      pos[static_cast<std::size_t>(v.id)] = it->second(v.pos);
    }
  }
  const auto tris = triangles_of(mesh);
  check_orientation(pos, tris, "snap_boundary");
  return build_mesh(pos, tris, attributes_of(mesh));
}

}  // namespace lsfem
