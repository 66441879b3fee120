#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "lsfem/convergence.hpp"
#include "lsfem/error.hpp"
#include "lsfem/mesh_generators.hpp"
#include "lsfem/postprocess.hpp"
#include "support.hpp"

namespace lsfem {
namespace {

ProblemSpec constant_problem(Vec2 beta, double gamma, double f) {
  ProblemSpec p;
  p.name = "constant";
  p.beta = [beta](Vec2) { return beta; };
  p.gamma = [gamma](Vec2) { return gamma; };
  p.f = [f](Vec2, int) { return f; };
  p.g = [](Vec2) { return 0.0; };
  return p;
}

TEST(RecoverFirst, IdentityFlux) {
  const Vec2 b{0.6, 0.8};
  const ProblemSpec p = constant_problem(b, 1.0, 1.0);
  const Mesh m = aligned_square(3);
  const FluxField s = interpolate_rt0(m, [b](Vec2) { return b; });
  for (double v : recover_u_first(s, m, p).values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(RecoverSecond, DivergenceFreeFluxWithFEqualsGamma) {
  const ProblemSpec p = constant_problem({1, 0}, 2.5, 2.5);
  const Mesh m = aligned_square(3);
  const FluxField s = interpolate_rt0(m, [](Vec2 x) { return Vec2{x.y, -x.x}; });
  for (double v : recover_u_second(s, m, p).values) EXPECT_NEAR(v, 1.0, 1e-13);
}

TEST(Recover, BothReproduceAlignedPiecewiseConstant) {
  const ProblemSpec p = builtin("ex51");
  const Mesh m = uniform_refine(uniform_refine(initial_mesh(p)));
  for (Formulation f : {Formulation::ls1, Formulation::ls2}) {
    for (Recovery r : {Recovery::first, Recovery::second}) {
      const testing::Solved s = testing::solve(m, p, f, r);
      for (Index k = 0; k < m.num_elements(); ++k) {
        const double exact = p.u_at(m.centroid(k));
        EXPECT_NEAR(s.u.values[static_cast<std::size_t>(k)], exact, 1e-10);
      }
    }
  }
}

TEST(RecoverFirst, CurvedFluxOutsideInnerCircle) {
  const ProblemSpec p = builtin("ex57_curved");
  Mesh m = initial_mesh(p);
  for (int k = 0; k < 3; ++k) m = uniform_refine(m);
  const FluxField s = interpolate_rt0(m, [&](Vec2 x) { return exact_sigma(p, x, p.region(x)).sigma; });
  const ScalarField u = recover_u_first(s, m, p);
  for (const Element& el : m.elements()) {
    const Triangle t = m.corners(el.id);
    const bool outside = std::all_of(t.begin(), t.end(), [](Vec2 v) { return norm(v) > 0.5 + 1e-12; });
    if (!outside) continue;
    EXPECT_NEAR(u.values[static_cast<std::size_t>(el.id)], 1.0, 2 * el.diameter);
  }
}

TEST(Recover, DegenerateCoefficientsThrow) {
  const Mesh m = aligned_square(1);
  const FluxField s{m.generation(), std::vector<double>(static_cast<std::size_t>(m.num_edges()), 0.0)};
  EXPECT_THROW(recover_u_first(s, m, constant_problem({0, 0}, 1, 1)), FieldError);
  EXPECT_THROW(recover_u_second(s, m, constant_problem({1, 0}, 0, 1)), FieldError);
}

TEST(Recover, RecoveriesAgreeOnSmoothProblem) {
  const ProblemSpec p = builtin("ex52");
  const Mesh m = classify_boundary(uniform_refine(uniform_refine(initial_mesh(p))), p.beta);
  const testing::Solved s = testing::solve(m, p);
  const ScalarField a = recover_u_first(s.flux, m, p);
  const ScalarField b = recover_u_second(s.flux, m, p);
  const double ea = l2_error_u(a, m, p);
  double diff = 0.0;
  for (Index k = 0; k < m.num_elements(); ++k) {
    const double d = a.values[static_cast<std::size_t>(k)] - b.values[static_cast<std::size_t>(k)];
    diff += m.element(k).area * d * d;
  }
  EXPECT_LE(std::sqrt(diff), 2 * ea);
}

TEST(ErrorNorms, InterpolantOfRepresentableFluxIsExact) {
  const ProblemSpec p = builtin("ex51");
  const Mesh m = uniform_refine(initial_mesh(p));
  const FluxField s = interpolate_rt0(m, [&](Vec2 x) { return exact_sigma(p, x, p.region(x)).sigma; });
  const ScalarField u = recover_u_first(s, m, p);
  const NormReport n = error_norms(s, {{Recovery::first, u}}, m, p);
  ASSERT_TRUE(n.ls1_norm && n.ls2_norm && n.l2_sigma && n.hdiv_sigma && n.l2_u_first);
  EXPECT_LE(*n.ls1_norm, 1e-10);
  EXPECT_LE(*n.ls2_norm, 1e-10);
  EXPECT_LE(*n.l2_sigma, 1e-10);
  EXPECT_LE(*n.hdiv_sigma, 1e-10);
  EXPECT_LE(*n.l2_u_first, 1e-10);
  EXPECT_FALSE(n.l2_u_second);
}

TEST(ErrorNorms, OrderingAndAvailability) {
  const ProblemSpec p = builtin("ex53_peterson");
  const Mesh m = initial_mesh(p);
  const testing::Solved s = testing::solve(m, p);
  const NormReport n = error_norms(s.flux, {{Recovery::first, s.u}}, m, p);
  EXPECT_TRUE(n.ls1_norm);
  EXPECT_FALSE(n.ls2_norm);
  ASSERT_TRUE(n.l2_sigma && n.hdiv_sigma && n.l2_div_sigma);
  EXPECT_GE(*n.hdiv_sigma, *n.l2_sigma);
  EXPECT_NEAR(*n.hdiv_sigma * *n.hdiv_sigma, *n.l2_sigma * *n.l2_sigma + *n.l2_div_sigma * *n.l2_div_sigma,
              1e-14);
}

TEST(ErrorNorms, NoExactSolution) {
  ProblemSpec p = builtin("ex52");
  p.exact_u = {};
  const Mesh m = initial_mesh(p);
  const testing::Solved s = testing::solve(m, p);
  const NormReport n = error_norms(s.flux, {{Recovery::first, s.u}}, m, p);
  EXPECT_TRUE(n.ls1_norm);
  EXPECT_FALSE(n.l2_sigma);
  EXPECT_FALSE(n.l2_u_first);
  EXPECT_THROW(l2_error_u(s.u, m, p), ProblemError);
}

TEST(ErrorNorms, SmoothProblemFirstOrder) {
  const ProblemSpec p = builtin("ex52");
  Mesh m = initial_mesh(p);
  std::vector<double> dofs;
  std::vector<std::optional<double>> ls;
  std::vector<std::optional<double>> l2u;
  std::vector<std::optional<double>> hdiv;
  for (int level = 0; level < 5; ++level) {
    const testing::Solved s = testing::solve(m, p);
    const NormReport n = error_norms(s.flux, {{Recovery::first, s.u}}, m, p);
    dofs.push_back(static_cast<double>(m.num_edges()));
    ls.push_back(n.ls1_norm);
    l2u.push_back(n.l2_u_first);
    hdiv.push_back(n.hdiv_sigma);
    m = classify_boundary(uniform_refine(m), p.beta);
  }
  EXPECT_NEAR(*fitted_order(dofs, ls), 1.0, 0.1);
  EXPECT_NEAR(*fitted_order(dofs, l2u), 1.0, 0.1);
  EXPECT_NEAR(*fitted_order(dofs, hdiv), 1.0, 0.1);
}

TEST(OutflowTrace, ConstantFieldAndCount) {
  const Mesh m = uniform_refine(aligned_square(3));
  const ScalarField u{m.generation(), std::vector<double>(static_cast<std::size_t>(m.num_elements()), 0.25)};
  const auto trace = outflow_trace(u, m, {TraceSelector::Kind::boundary_line_y, 1.0});
  int touching = 0;
  for (const Edge& e : m.edges()) {
    if (e.is_boundary() && std::abs(m.edge_midpoint(e.id).y - 1.0) < 1e-14) ++touching;
  }
  EXPECT_EQ(static_cast<int>(trace.size()), touching);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_EQ(trace[i].value, 0.25);
    if (i > 0) EXPECT_LT(trace[i - 1].x, trace[i].x);
  }
}

TEST(OutflowTrace, EmptySelectionThrows) {
  const Mesh m = aligned_square(2);
  const ScalarField u{m.generation(), std::vector<double>(static_cast<std::size_t>(m.num_elements()), 0.0)};
  EXPECT_THROW(outflow_trace(u, m, {TraceSelector::Kind::boundary_line_y, 0.5}), FieldError);
}

TEST(OutflowTrace, RadialSamplesEveryElement) {
  const Mesh m = half_disk();
  const ScalarField u{m.generation(), std::vector<double>(static_cast<std::size_t>(m.num_elements()), 1.0)};
  const auto trace = outflow_trace(u, m, {TraceSelector::Kind::radial, 0.0});
  EXPECT_EQ(static_cast<Index>(trace.size()), m.num_elements());
}

TEST(Overshoot, WithinWindowIsZero) {
  const ProblemSpec p = builtin("ex55");
  const Mesh m = initial_mesh(p);
  ScalarField u{m.generation(), std::vector<double>(static_cast<std::size_t>(m.num_elements()), 0.8)};
  EXPECT_EQ(overshoot_value(u, m, p), 0.0);
  u.values.assign(u.values.size(), 1.1);
  EXPECT_NEAR(overshoot_value(u, m, p), 0.1, 1e-15);
  u.values.assign(u.values.size(), 0.5);
  EXPECT_NEAR(overshoot_value(u, m, p), 1.0 - std::exp(-1.0) - 0.5, 1e-15);
  EXPECT_THROW(overshoot_value(u, m, builtin("ex52")), ProblemError);
}

TEST(Convergence, PairwiseOrders) {
  const std::vector<double> dofs{100, 400, 1600};
  const std::vector<std::optional<double>> err{0.1, 0.05, std::nullopt};
  const auto o = pairwise_orders(dofs, err);
  ASSERT_EQ(o.size(), 2u);
  ASSERT_TRUE(o[0]);
  EXPECT_NEAR(*o[0], 1.0, 1e-14);
  EXPECT_FALSE(o[1]);
}

TEST(Convergence, FittedOrderUsesLastWindow) {
  // rate 2 early, exactly 0.5 on the last four points
  std::vector<double> dofs;
  std::vector<std::optional<double>> err;
  double e = 1.0;
  for (int i = 0; i < 7; ++i) {
    dofs.push_back(std::pow(4.0, i));
    err.push_back(e);
    e *= i < 3 ? 0.25 : std::pow(2.0, -0.5);
  }
  EXPECT_NEAR(*fitted_order(dofs, err, 4), 0.5, 1e-12);
  EXPECT_FALSE(fitted_order(std::vector<double>{1.0}, std::vector<std::optional<double>>{1.0}));
  EXPECT_THROW(fitted_order(std::vector<double>{1.0, 2.0}, std::vector<std::optional<double>>{1.0}), Error);
}

}  // namespace
}  // namespace lsfem
