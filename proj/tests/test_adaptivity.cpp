#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lsfem/adaptivity.hpp"
#include "lsfem/error.hpp"
#include "lsfem/integration.hpp"
#include "lsfem/mesh_generators.hpp"
#include "support.hpp"

namespace lsfem {
namespace {

double mass(std::span<const double> eta, const std::vector<Index>& set) {
  double s = 0.0;
  for (Index k : set) s += eta[static_cast<std::size_t>(k)] * eta[static_cast<std::size_t>(k)];
  return s;
}

// Smallest subset size reaching the bulk criterion, by enumeration.
std::size_t brute_force_minimum(const std::vector<double>& eta, double theta) {
  const double total = std::inner_product(eta.begin(), eta.end(), eta.begin(), 0.0);
  std::size_t best = eta.size() + 1;
  for (unsigned mask = 0; mask < (1u << eta.size()); ++mask) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (mask & (1u << i)) {
        s += eta[i] * eta[i];
        ++n;
      }
    }
    if (s >= theta * total) best = std::min(best, n);
  }
  return best;
}

TEST(Dorfler, ThetaZeroMarksNothing) {
  const std::vector<double> eta{1, 2, 3};
  EXPECT_TRUE(dorfler_mark(eta, 0.0).empty());
}

TEST(Dorfler, ThetaOneMarksAllPositive) {
  const std::vector<double> eta{1, 0, 3, 0.5};
  auto m = dorfler_mark(eta, 1.0);
  std::sort(m.begin(), m.end());
  EXPECT_EQ(m, (std::vector<Index>{0, 2, 3}));
}

TEST(Dorfler, HandExample) {
  const std::vector<double> eta{2, 1, 1};
  EXPECT_EQ(dorfler_mark(eta, 0.5), (std::vector<Index>{0}));
}

TEST(Dorfler, TiesByLowerId) {
  const std::vector<double> eta{1, 3, 1, 3, 1};
  EXPECT_EQ(dorfler_mark(eta, 0.5), (std::vector<Index>{1, 3}));
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_EQ(dorfler_mark(flat, 0.6), (std::vector<Index>{0, 1, 2}));
}

TEST(Dorfler, RejectsBadTheta) {
  const std::vector<double> eta{1};
  EXPECT_THROW(dorfler_mark(eta, -0.1), ConfigError);
  EXPECT_THROW(dorfler_mark(eta, 1.5), ConfigError);
}

TEST(Dorfler, MinimalAgainstBruteForce) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> eta(static_cast<std::size_t>(size(rng)));
    for (double& e : eta) e = trial % 3 == 0 ? std::round(4 * value(rng)) : value(rng);
    const double theta = value(rng);
    const auto marked = dorfler_mark(eta, theta);
    const double total = std::inner_product(eta.begin(), eta.end(), eta.begin(), 0.0);
    EXPECT_GE(mass(eta, marked), theta * total);
    EXPECT_EQ(marked.size(), brute_force_minimum(eta, theta));
    if (!marked.empty()) {
      auto fewer = marked;
      fewer.pop_back();  // the smallest selected indicator
      EXPECT_LT(mass(eta, fewer), theta * total);
    }
  }
}

TEST(Indicators, ZeroOnAlignedDiscontinuity) {
  const ProblemSpec p = builtin("ex51");
  const Mesh m = uniform_refine(initial_mesh(p));
  for (Formulation f : {Formulation::ls1, Formulation::ls2}) {
    const testing::Solved s = testing::solve(m, p, f);
    const IndicatorField ind = indicators(s.flux, m, p, f);
    EXPECT_EQ(ind.mesh_generation, m.generation());
    for (double e : ind.eta) EXPECT_LE(e, 1e-10);
  }
}

TEST(Indicators, SumMatchesFunctional) {
  for (const char* name : {"ex52", "ex54", "ex57_curved", "ex58_layer"}) {
    const ProblemSpec p = builtin(name);
    const Mesh m = uniform_refine(initial_mesh(p));
    for (Formulation f : {Formulation::ls1, Formulation::ls2}) {
      if (!p.allows(f)) continue;
      const testing::Solved s = testing::solve(m, p, f);
      const double j = ls_functional(s.flux, m, p, f);
      EXPECT_NEAR(indicators(s.flux, m, p, f).sum_of_squares(), j, 1e-12 * j) << name;
    }
  }
}

TEST(Indicators, LocalEfficiencyOnSmoothProblem) {
  const ProblemSpec p = builtin("ex52");
  const Mesh m = classify_boundary(uniform_refine(initial_mesh(p)), p.beta);
  const testing::Solved s = testing::solve(m, p);
  const IndicatorField ind = indicators(s.flux, m, p, Formulation::ls1);
  // |div e + (gamma/|beta|^2) beta.e| + |e.beta_perp| <= (1 + gamma/|beta|) |e| + |div e|
  const double c = std::sqrt(2.0) * (1.0 + 1.0 / std::sqrt(2.0));
  std::vector<QuadPoint> pts;
  for (const Element& el : m.elements()) {
    pts.clear();
    integration_points(m.corners(el.id), quadrature(10), nullptr, pts);
    double local = 0.0;
    const double div = eval_flux_div(s.flux, m, el.id);
    for (const QuadPoint& q : pts) {
      const ExactFlux ex = exact_sigma(p, q.x);
      local += q.weight * (norm2(ex.sigma - eval_flux(s.flux, m, el.id, q.x)) + std::pow(ex.div - div, 2));
    }
    EXPECT_LE(ind.eta[static_cast<std::size_t>(el.id)], c * std::sqrt(local) * (1 + 1e-12));
  }
}

TEST(EstimatorFloor, ScalesWithData) {
  const ProblemSpec p = builtin("ex55");
  EXPECT_NEAR(estimator_floor(initial_mesh(p), p), 1e-10 * std::sqrt(2.0), 1e-22);
  const ProblemSpec q = builtin("ex57_curved");
  EXPECT_EQ(estimator_floor(initial_mesh(q), q), 1e-10);
}

TEST(CheckVariant, RefusesDisallowed) {
  const ProblemSpec p = builtin("ex53_peterson");
  EXPECT_NO_THROW(check_variant(p, Formulation::ls1, Recovery::first));
  EXPECT_THROW(check_variant(p, Formulation::ls2, Recovery::first), ConfigError);
  EXPECT_THROW(check_variant(p, Formulation::ls1, Recovery::second), ConfigError);
}

TEST(AdaptLoop, StopsImmediatelyWhenExact) {
  const ProblemSpec p = builtin("ex51");
  StudyOptions o;
  o.formulation = Formulation::ls2;
  o.recovery = Recovery::second;
  int calls = 0;
  const auto h = adapt_loop(p, o, [&](const StepState& s) {
    ++calls;
    EXPECT_TRUE(s.marked.empty());
  });
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(calls, 1);
  EXPECT_LE(h[0].eta, 1e-10);
}

TEST(AdaptLoop, MonotoneDofsAndBudget) {
  const ProblemSpec p = builtin("ex54");
  StudyOptions o;
  o.dof_budget = 3000;
  std::vector<double> marked_fraction;
  const auto h = adapt_loop(p, o, [&](const StepState& s) {
    EXPECT_EQ(s.eta.mesh_generation, s.mesh.generation());
    EXPECT_EQ(s.u.mesh_generation, s.mesh.generation());
    if (!s.marked.empty()) {
      EXPECT_GE(mass(s.eta.eta, {s.marked.begin(), s.marked.end()}), 0.5 * s.eta.sum_of_squares());
    }
  });
  ASSERT_GE(h.size(), 3u);
  for (std::size_t i = 1; i < h.size(); ++i) {
    EXPECT_GT(h[i].dofs, h[i - 1].dofs);
    EXPECT_EQ(h[i].step, static_cast<int>(i));
  }
  EXPECT_GE(h.back().dofs, 3000);
  EXPECT_LT(h[h.size() - 2].dofs, 3000);
  for (const ConvergenceRecord& r : h) {
    ASSERT_TRUE(r.err_ls && r.err_l2_u && r.err_hdiv);
    EXPECT_NEAR(*r.err_ls, r.eta, 1e-12 * r.eta);
    EXPECT_FALSE(r.overshoot);
  }
}

TEST(AdaptLoop, MaxStepsCap) {
  StudyOptions o;
  o.max_steps = 2;
  EXPECT_EQ(adapt_loop(builtin("ex52"), o).size(), 2u);
}

TEST(AdaptLoop, RecordsOvershootWhenDeclared) {
  StudyOptions o;
  o.dof_budget = 200;
  const auto h = adapt_loop(builtin("ex55"), o);
  for (const ConvergenceRecord& r : h) EXPECT_TRUE(r.overshoot);
}

TEST(UniformStudy, BudgetAndLevels) {
  const ProblemSpec p = builtin("ex52");
  StudyOptions o;
  o.dof_budget = 1000;
  const auto h = uniform_study(p, o);
  ASSERT_EQ(h.size(), 3u);  // 40, 176, 736 free dofs
  EXPECT_LE(h.back().dofs, 1000);
  o.levels = 1;
  EXPECT_EQ(uniform_study(p, o).size(), 2u);
  o.levels.reset();
  o.dof_budget = 10;
  EXPECT_THROW(uniform_study(p, o), ConfigError);
}

TEST(UniformStudy, PetersonRegenerates) {
  const ProblemSpec p = builtin("ex53_peterson");
  StudyOptions o;
  o.levels = 2;
  std::vector<double> h_max;
  uniform_study(p, o, [&](const StepState& s) {
    EXPECT_EQ(s.mesh.generation(), 0);
    h_max.push_back(s.mesh.h_max());
  });
  ASSERT_EQ(h_max.size(), 3u);
  EXPECT_NEAR(h_max[0] / h_max[1], 2.0, 1e-12);
  EXPECT_NEAR(h_max[1] / h_max[2], 2.0, 1e-12);
}

TEST(UniformStudy, RefusesDisallowedVariant) {
  StudyOptions o;
  o.formulation = Formulation::ls2;
  EXPECT_THROW(uniform_study(builtin("ex57_curved"), o), ConfigError);
  EXPECT_THROW(adapt_loop(builtin("ex57_curved"), o), ConfigError);
}

TEST(FreeDofCount, ExcludesInflowEdges) {
  const ProblemSpec p = builtin("ex52");
  const Mesh m = initial_mesh(p);
  EXPECT_EQ(free_dof_count(m), m.num_edges() - 8);
}

}  // namespace
}  // namespace lsfem
