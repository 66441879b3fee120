#include "lsfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

constexpr int kMaxGaussPoints = 16;

GaussRule1D build_gauss_legendre(int n) {
  GaussRule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map from [-1, 1] to [0, 1]; weights 2/((1-x^2) P'^2) halve twice.
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule build_triangle_rule(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  if (degree == 1) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(1.0);
    return rule;
  }
  // Collapsed map (s, t) -> (x, y) = (s (1 - t), t) with Jacobian (1 - t);
  // the extra factor needs one more degree of exactness in t.
  const int ns = (degree + 2) / 2;
  const int nt = (degree + 3) / 2;
  const GaussRule1D& gs = gauss_legendre(ns);
  const GaussRule1D& gt = gauss_legendre(nt);
  double total = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double t = gt.nodes[static_cast<std::size_t>(j)];
    for (int i = 0; i < ns; ++i) {
      const double s = gs.nodes[static_cast<std::size_t>(i)];
      const double x = s * (1.0 - t);
      const double y = t;
      // Reference area is 1/2: w = ws * wt * (1 - t) / (1/2).
      const double w = 2.0 * gs.weights[static_cast<std::size_t>(i)] *
                       gt.weights[static_cast<std::size_t>(j)] * (1.0 - t);
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(w);
      total += w;
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

const GaussRule1D& gauss_legendre(int n) {
  static const std::array<GaussRule1D, kMaxGaussPoints> rules = [] {
    std::array<GaussRule1D, kMaxGaussPoints> r;
    for (int k = 1; k <= kMaxGaussPoints; ++k) r[static_cast<std::size_t>(k - 1)] = build_gauss_legendre(k);
    return r;
  }();
  if (n < 1 || n > kMaxGaussPoints) {
    throw Error("gauss_legendre: unsupported point count " + std::to_string(n));
  }
  return rules[static_cast<std::size_t>(n - 1)];
}

const QuadratureRule& quadrature(int degree) {
  static const std::array<QuadratureRule, kMaxQuadratureDegree> rules = [] {
    std::array<QuadratureRule, kMaxQuadratureDegree> r;
    for (int d = 1; d <= kMaxQuadratureDegree; ++d) r[static_cast<std::size_t>(d - 1)] = build_triangle_rule(d);
    return r;
  }();
  if (degree < 1 || degree > kMaxQuadratureDegree) {
    throw Error("quadrature: unsupported degree " + std::to_string(degree));
  }
  return rules[static_cast<std::size_t>(degree - 1)];
}

}  // namespace lsfem
