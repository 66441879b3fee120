#include "lsfem/integration.hpp"

#include <algorithm>
#include <cmath>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

constexpr int kCircleSubdivisionDepth = 3;

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double t = std::clamp(dot(p - a, d) / norm2(d), 0.0, 1.0);
  return norm(p - (a + t * d));
}

bool contains(const Triangle& t, Vec2 p) {
  const double s0 = signed_area2(t[0], t[1], p);
  const double s1 = signed_area2(t[1], t[2], p);
  const double s2 = signed_area2(t[2], t[0], p);
  return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

int vertex_sign(const Interface& cut, Vec2 p, double tol) {
  const double l = cut.level(p);
  if (l > tol) return 1;
  if (l < -tol) return -1;
  return 0;
}

void append_rule(const Triangle& t, const QuadratureRule& rule, int region, std::vector<QuadPoint>& out) {
  const double a = std::abs(area(t));
  if (a == 0.0) return;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& l = rule.points[q];
    out.push_back({l[0] * t[0] + l[1] * t[1] + l[2] * t[2], rule.weights[q] * a, region});
  }
}

// Splits along the straight segment joining the two crossings.
void append_split(const Triangle& t, const QuadratureRule& rule, const Interface& cut,
                  std::vector<QuadPoint>& out) {
  const double tol = 1e-12 * std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
  const std::array<int, 3> s{vertex_sign(cut, t[0], tol), vertex_sign(cut, t[1], tol),
                             vertex_sign(cut, t[2], tol)};
  const bool has_pos = s[0] > 0 || s[1] > 0 || s[2] > 0;
  const bool has_neg = s[0] < 0 || s[1] < 0 || s[2] < 0;
  auto piece = [&](const Triangle& sub) { append_rule(sub, rule, cut.side(centroid(sub)), out); };
  if (!(has_pos && has_neg)) {
    piece(t);
    return;
  }
  for (int i = 0; i < 3; ++i) {
    if (s[i] != 0) continue;
    const Vec2 p = t[(i + 1) % 3];
    const Vec2 q = t[(i + 2) % 3];
    const Vec2 c = cut.crossing(p, q);
    piece({t[i], p, c});
    piece({t[i], c, q});
    return;
  }
  int lone = 0;
  for (int i = 0; i < 3; ++i) {
    if (s[i] != s[(i + 1) % 3] && s[i] != s[(i + 2) % 3]) lone = i;
  }
  const Vec2 l = t[lone];
  const Vec2 a = t[(lone + 1) % 3];
  const Vec2 b = t[(lone + 2) % 3];
  const Vec2 pa = cut.crossing(l, a);
  const Vec2 pb = cut.crossing(l, b);
  piece({l, pa, pb});
  piece({pa, a, b});
  piece({pa, b, pb});
}

void append_circle(const Triangle& t, const QuadratureRule& rule, const Interface& cut, int depth,
                   std::vector<QuadPoint>& out) {
  if (!is_cut(t, cut)) {
    append_rule(t, rule, cut.side(centroid(t)), out);
    return;
  }
  if (depth == 0) {
    append_split(t, rule, cut, out);
    return;
  }
  const Vec2 m01 = 0.5 * (t[0] + t[1]);
  const Vec2 m12 = 0.5 * (t[1] + t[2]);
  const Vec2 m20 = 0.5 * (t[2] + t[0]);
  append_circle({t[0], m01, m20}, rule, cut, depth - 1, out);
  append_circle({m01, t[1], m12}, rule, cut, depth - 1, out);
  append_circle({m20, m12, t[2]}, rule, cut, depth - 1, out);
  append_circle({m01, m12, m20}, rule, cut, depth - 1, out);
}

}  // namespace

Interface Interface::line(Vec2 a, Vec2 b) {
  if (a == b) throw Error("Interface::line: points coincide");
  Interface i;
  i.a_ = a;
  i.b_ = b;
  return i;
}

Interface Interface::circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw Error("Interface::circle: radius must be positive");
  Interface i;
  i.circle_ = true;
  i.a_ = center;
  i.radius_ = radius;
  return i;
}

double Interface::level(Vec2 p) const {
  if (circle_) return norm(p - a_) - radius_;
  const Vec2 d = b_ - a_;
  return cross(d, p - a_) / norm(d);
}

int Interface::side(Vec2 p) const {
  const double l = level(p);
  if (l > 1e-12) return 1;
  if (l < -1e-12) return -1;
  return 0;
}

Vec2 Interface::normal(Vec2 p) const {
  if (circle_) {
    const Vec2 r = p - a_;
    return r / norm(r);
  }
  const Vec2 d = (b_ - a_) / norm(b_ - a_);
  return {-d.y, d.x};
}

Vec2 Interface::crossing(Vec2 p, Vec2 q) const {
  const double lp = level(p);
  const double lq = level(q);
  if (!circle_) {
    const double t = lp / (lp - lq);
    return p + t * (q - p);
  }
  // |p + t d - c|^2 = r^2, root inside [0, 1].
  const Vec2 d = q - p;
  const Vec2 w = p - a_;
  const double A = norm2(d);
  const double B = 2.0 * dot(w, d);
  const double C = norm2(w) - radius_ * radius_;
  const double disc = std::max(0.0, B * B - 4.0 * A * C);
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (B + std::copysign(sq, B));
  double best = 0.5;
  double best_err = 2.0;
  for (const double t : {qq / A, qq != 0.0 ? C / qq : 0.5}) {
    const double err = t < 0.0 ? -t : (t > 1.0 ? t - 1.0 : 0.0);
    if (err < best_err) {
      best = t;
      best_err = err;
    }
  }
  return p + std::clamp(best, 0.0, 1.0) * d;
}

bool is_cut(const Triangle& t, const Interface& cut) {
  const double scale = std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
  const double tol = 1e-12 * scale;
  if (!cut.is_circle()) {
    const int s0 = vertex_sign(cut, t[0], tol);
    const int s1 = vertex_sign(cut, t[1], tol);
    const int s2 = vertex_sign(cut, t[2], tol);
    return std::min({s0, s1, s2}) < 0 && std::max({s0, s1, s2}) > 0;
  }
  const Vec2 c = cut.center();
  double dmax = 0.0;
  for (const Vec2& p : t) dmax = std::max(dmax, norm(p - c));
  double dmin = contains(t, c) ? 0.0
                               : std::min({point_segment_distance(c, t[0], t[1]),
                                           point_segment_distance(c, t[1], t[2]),
                                           point_segment_distance(c, t[2], t[0])});
  return dmin < cut.radius() - tol && dmax > cut.radius() + tol;
}

void integration_points(const Triangle& tri, const QuadratureRule& rule, const Interface* cut,
                        std::vector<QuadPoint>& out) {
  if (cut == nullptr) {
    append_rule(tri, rule, 0, out);
    return;
  }
  if (!is_cut(tri, *cut)) {
    append_rule(tri, rule, cut->side(centroid(tri)), out);
    return;
  }
  if (cut->is_circle()) {
    append_circle(tri, rule, *cut, kCircleSubdivisionDepth, out);
  } else {
    append_split(tri, rule, *cut, out);
  }
}

}  // namespace lsfem
