#include "lsfem/assembly.hpp"

#include <cmath>
#include <sstream>

#include "lsfem/error.hpp"
#include "lsfem/integration.hpp"
#include "lsfem/rt0.hpp"

namespace lsfem {

namespace {

constexpr double kTiny = 1e-14;

[[noreturn]] void zero_beta(const ProblemSpec& problem, Index element, Vec2 x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << problem.name << ": |beta| < 1e-14 at (" << x.x << ", " << x.y << ") in element " << element
      << "; ls1 is undefined there";
  throw AssemblyError(msg.str());
}

}  // namespace

LocalSystem local_system(const Mesh& mesh, Index element, const ProblemSpec& problem,
                         Formulation formulation, const QuadratureRule& rule) {
  const Element& el = mesh.element(element);
  thread_local std::vector<QuadPoint> pts;
  pts.clear();
  integration_points(mesh.corners(element), rule, problem.cut(), pts);

  std::array<double, 3> div{};
  for (int i = 0; i < 3; ++i) div[static_cast<std::size_t>(i)] = rt0_div(el, i);

  LocalSystem out;
  for (const QuadPoint& q : pts) {
    const Vec2 b = problem.beta(q.x);
    const double g = problem.gamma(q.x);
    const double f = problem.f(q.x, q.region);
    std::array<Vec2, 3> phi;
    for (int i = 0; i < 3; ++i) phi[static_cast<std::size_t>(i)] = rt0_basis_value(mesh, el, i, q.x);

    if (formulation == Formulation::ls1) {
      const double b2 = norm2(b);
      if (!(std::sqrt(b2) >= kTiny)) zero_beta(problem, element, q.x);
      const double gt = g / b2;
      const Vec2 bp = beta_perp(b);
      Eigen::Vector3d l;
      Eigen::Vector3d p;
      for (std::size_t i = 0; i < 3; ++i) {
        l[static_cast<Eigen::Index>(i)] = div[i] + gt * dot(b, phi[i]);
        p[static_cast<Eigen::Index>(i)] = dot(phi[i], bp);
      }
      out.matrix += q.weight * (l * l.transpose() + p * p.transpose());
      out.load += (q.weight * f) * l;
    } else {
      std::array<Vec2, 3> m;
      for (std::size_t i = 0; i < 3; ++i) m[i] = g * phi[i] + div[i] * b;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              q.weight * dot(m[i], m[j]);
        }
        out.load[static_cast<Eigen::Index>(i)] += q.weight * f * dot(b, m[i]);
      }
    }
  }
  return out;
}

double inflow_dof_value(const Mesh& mesh, const Edge& edge, const ProblemSpec& problem) {
  const GaussRule1D& rule = gauss_legendre(5);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const Vec2 x = mesh.edge_point(edge.id, rule.nodes[q]);
    const double g = problem.g(x);
    if (!std::isfinite(g)) {
      throw AssemblyError(problem.name + ": inflow data not finite on edge " + std::to_string(edge.id));
    }
    s += rule.weights[q] * dot(problem.beta(x), edge.unit_normal) * g;
  }
  return s * edge.length;
}

LinearSystem assemble(const Mesh& mesh, const ProblemSpec& problem, Formulation formulation,
                      int quad_degree) {
  const QuadratureRule& rule = quadrature(quad_degree);
  LinearSystem sys;
  sys.mesh_generation = mesh.generation();
  sys.formulation = formulation;

  const auto ne = static_cast<std::size_t>(mesh.num_edges());
  sys.edge_to_free.assign(ne, kNone);
  std::vector<double> prescribed(ne, 0.0);
  for (const Edge& e : mesh.edges()) {
    if (e.bclass == BoundaryClass::inflow) {
      const double v = inflow_dof_value(mesh, e, problem);
      prescribed[static_cast<std::size_t>(e.id)] = v;
      sys.constrained.emplace_back(e.id, v);
    } else {
      sys.edge_to_free[static_cast<std::size_t>(e.id)] = static_cast<Index>(sys.free_to_edge.size());
      sys.free_to_edge.push_back(e.id);
    }
  }

  if (formulation == Formulation::ls2) {
    bool all_zero = true;
    for (Index k = 0; k < mesh.num_elements() && all_zero; ++k) {
      const Triangle t = mesh.corners(k);
      for (const Vec2 x : {centroid(t), t[0], t[1], t[2]}) {
        if (std::abs(problem.gamma(x)) >= kTiny) {
          all_zero = false;
          break;
        }
      }
    }
    if (all_zero) {
      sys.warnings.push_back(problem.name +
                             ": gamma vanishes on the whole mesh; ls2 is singular for this problem");
    }
  }

  const Index nf = sys.num_free();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  sys.rhs = Eigen::VectorXd::Zero(nf);

  for (const Element& el : mesh.elements()) {
    const LocalSystem loc = local_system(mesh, el.id, problem, formulation, rule);
    for (int i = 0; i < 3; ++i) {
      const Index fi = sys.edge_to_free[static_cast<std::size_t>(el.edges[static_cast<std::size_t>(i)])];
      if (fi == kNone) continue;
      double r = loc.load[i];
      for (int j = 0; j < 3; ++j) {
        const Index edge_j = el.edges[static_cast<std::size_t>(j)];
        const Index fj = sys.edge_to_free[static_cast<std::size_t>(edge_j)];
        if (fj == kNone) {
          r -= loc.matrix(i, j) * prescribed[static_cast<std::size_t>(edge_j)];
        } else {
          triplets.emplace_back(fi, fj, loc.matrix(i, j));
        }
      }
      sys.rhs[fi] += r;
    }
  }
  sys.matrix.resize(nf, nf);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

}  // namespace lsfem
