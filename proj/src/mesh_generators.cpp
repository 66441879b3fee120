#include "lsfem/mesh_generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsfem/error.hpp"

namespace lsfem {

Mesh aligned_square(int n) {
  if (n < 1) throw MeshError("aligned_square: n must be positive");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<Index, 3>> t;
  t.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return build_mesh(v, t);
}

Mesh split_rectangle() {
  const double a = std::numbers::pi / 3.0;
  const std::vector<Vec2> v{{0.0, 0.0}, {a, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {0.0, 1.0}};
  const std::vector<std::array<Index, 3>> t{{0, 1, 4}, {0, 4, 5}, {1, 2, 3}, {1, 3, 4}};
  return build_mesh(v, t);
}

Mesh peterson(double h) {
  const double inv = 1.0 / h;
  const auto m = static_cast<int>(std::lround(inv));
  if (!(h > 0.0) || m < 2 || std::abs(inv - m) > 1e-9 * inv) {
    throw MeshError("peterson: h must be 1/m for an integer m >= 2, got " + std::to_string(h));
  }
  // Built on vertical lines and transposed at the end, so that the final
  // mesh has horizontal lines y = i h carrying nodes at multiples of h on
  // even lines and at the midpoints between them on odd lines (plus both
  // ends). No mesh edge is parallel to the vertical flow direction.
  std::vector<Vec2> v;
  std::vector<std::vector<Index>> lines(static_cast<std::size_t>(m + 1));
  for (int i = 0; i <= m; ++i) {
    const double x = static_cast<double>(i) / m;
    auto& line = lines[static_cast<std::size_t>(i)];
    auto add = [&](double y) {
      line.push_back(static_cast<Index>(v.size()));
      v.push_back({x, y});
    };
    add(0.0);
    if (i % 2 == 0) {
      for (int j = 1; j < m; ++j) add(static_cast<double>(j) / m);
    } else {
      for (int j = 0; j < m; ++j) add((j + 0.5) / m);
    }
    add(1.0);
  }
  std::vector<std::array<Index, 3>> t;
  for (int i = 0; i < m; ++i) {
    const auto& left = lines[static_cast<std::size_t>(i)];
    const auto& right = lines[static_cast<std::size_t>(i + 1)];
    std::size_t l = 0;
    std::size_t r = 0;
    while (l + 1 < left.size() || r + 1 < right.size()) {
      const bool advance_left =
          r + 1 == right.size() ||
          (l + 1 < left.size() && v[left[l + 1]].y <= v[right[r + 1]].y);
      if (advance_left) {
        t.push_back({left[l], right[r], left[l + 1]});
        ++l;
      } else {
        t.push_back({left[l], right[r], right[r + 1]});
        ++r;
      }
    }
  }
  for (Vec2& p : v) p = {p.y, p.x};
  return build_mesh(v, t);
}

Mesh half_disk() {
  using std::numbers::pi;
  std::vector<Vec2> v{{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
  // Arc vertices at 150, 120, 90, 60, 30 degrees: ids 5..9.
  for (int k = 5; k >= 1; --k) {
    const double th = k * pi / 6.0;
    v.push_back({std::cos(th), std::sin(th)});
  }
  v[7] = {0.0, 1.0};
  // Inner ring at radius 1/2 and 135, 90, 45 degrees: ids 10..12.
  const double s = 0.5 * std::sqrt(0.5);
  v.push_back({-s, s});
  v.push_back({0.0, 0.5});
  v.push_back({s, s});

  const std::vector<std::array<Index, 3>> t{
      {1, 2, 10}, {2, 11, 10}, {2, 12, 11}, {2, 3, 12},                // inner
      {0, 1, 5},  {1, 10, 5},  {10, 6, 5},  {10, 11, 6}, {11, 7, 6},  // outer, left
      {11, 8, 7}, {11, 12, 8}, {12, 9, 8},  {12, 3, 9},  {3, 4, 9}};  // outer, right

  MeshAttributes attr;
  attr.vertex_tags.assign(v.size(), kNoGeometry);
  for (Index i : {0, 4, 5, 6, 7, 8, 9}) attr.vertex_tags[static_cast<std::size_t>(i)] = kUnitCircleArc;
  const std::array<Index, 7> arc{0, 5, 6, 7, 8, 9, 4};
  for (std::size_t k = 0; k + 1 < arc.size(); ++k) {
    attr.edge_tags.push_back({arc[k], arc[k + 1], kUnitCircleArc});
  }
  attr.hooks[kUnitCircleArc] = project_to_unit_circle;
  return build_mesh(v, t, std::move(attr));
}

Mesh generate_initial_mesh(std::string_view name, const MeshParams& params) {
  if (name == "aligned_square") return aligned_square(params.n);
  if (name == "split_rectangle") return split_rectangle();
  if (name == "peterson") return peterson(params.h);
  if (name == "half_disk") return half_disk();
  throw MeshError("unknown mesh '" + std::string(name) + "'");
}

}  // namespace lsfem
