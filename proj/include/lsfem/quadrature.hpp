#pragma once

#include <array>
#include <vector>

namespace lsfem {

inline constexpr int kMaxQuadratureDegree = 10;

/// Rule on the reference triangle; weights are normalized to sum to one.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;  // barycentric coordinates
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre rule on [0, 1] with weights summing to one.
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Triangle rule exact for polynomials of total degree <= degree (1..10).
/// Degree 1 is the centroid rule; higher degrees use a collapsed
/// Gauss-Legendre product.
const QuadratureRule& quadrature(int degree);

/// n-point Gauss-Legendre rule, n in 1..16.
const GaussRule1D& gauss_legendre(int n);

}  // namespace lsfem
