#pragma once

#include <vector>

#include "lsfem/geometry.hpp"
#include "lsfem/quadrature.hpp"

namespace lsfem {

/// A curve across which problem data may jump: a straight line through two
/// points or a circle.
class Interface {
 public:
  static Interface line(Vec2 a, Vec2 b);
  static Interface circle(Vec2 center, double radius);

  bool is_circle() const { return circle_; }
  /// Signed distance; positive to the left of a line, outside a circle.
  double level(Vec2 p) const;
  /// +1 / -1 by the sign of level(), 0 within 1e-12 of the curve.
  int side(Vec2 p) const;
  /// A point of the segment pq on the curve; p and q on opposite sides.
  Vec2 crossing(Vec2 p, Vec2 q) const;
  /// Unit normal of the curve at (or nearest to) p, pointing to side +1.
  Vec2 normal(Vec2 p) const;

  Vec2 a() const { return a_; }
  Vec2 b() const { return b_; }
  Vec2 center() const { return a_; }
  double radius() const { return radius_; }

 private:
  bool circle_ = false;
  Vec2 a_;
  Vec2 b_;
  double radius_ = 0.0;
};

struct QuadPoint {
  Vec2 x;
  double weight = 0.0;  // includes the area factor
  int region = 0;       // side of the interface, 0 without one
};

/// Appends physical quadrature points for a triangle. When an interface cuts
/// the triangle, it is split into sub-triangles along the (chord of the)
/// curve and each piece is integrated with the rule; circles are first
/// resolved by recursive subdivision of the cut region.
void integration_points(const Triangle& tri, const QuadratureRule& rule, const Interface* cut,
                        std::vector<QuadPoint>& out);

/// True when the interface passes through the interior of the triangle.
bool is_cut(const Triangle& tri, const Interface& cut);

}  // namespace lsfem
