#include "lsfem/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsfem/error.hpp"
#include "lsfem/integration.hpp"
#include "lsfem/quadrature.hpp"

namespace lsfem {

namespace {

constexpr double kTiny = 1e-14;
constexpr int kRecoveryDegree = 4;

[[noreturn]] void degenerate(const char* what, const ProblemSpec& problem, Vec2 x) {
  std::ostringstream msg;
  msg << problem.name << ": " << what << " at (" << x.x << ", " << x.y << ")";
  throw FieldError(msg.str());
}

}  // namespace

ScalarField recover_u_first(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem) {
  check_binding(flux, mesh);
  ScalarField u{mesh.generation(), std::vector<double>(static_cast<std::size_t>(mesh.num_elements()))};
  std::vector<QuadPoint> pts;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), quadrature(kRecoveryDegree), nullptr, pts);
    double sum = 0.0;
    for (const QuadPoint& q : pts) {
      const Vec2 b = problem.beta(q.x);
      const double b2 = norm2(b);
      if (!(std::sqrt(b2) >= kTiny)) degenerate("|beta| < 1e-14 in the first recovery", problem, q.x);
      sum += q.weight * dot(eval_flux(flux, mesh, k, q.x), b) / b2;
    }
    u.values[static_cast<std::size_t>(k)] = sum / mesh.element(k).area;
  }
  return u;
}

ScalarField recover_u_second(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem) {
  check_binding(flux, mesh);
  ScalarField u{mesh.generation(), std::vector<double>(static_cast<std::size_t>(mesh.num_elements()))};
  std::vector<QuadPoint> pts;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), quadrature(kRecoveryDegree), problem.cut(), pts);
    const double div = eval_flux_div(flux, mesh, k);
    double sum = 0.0;
    for (const QuadPoint& q : pts) {
      const double g = problem.gamma(q.x);
      if (!(std::abs(g) >= kTiny)) degenerate("|gamma| < 1e-14 in the second recovery", problem, q.x);
      sum += q.weight * (problem.f(q.x, q.region) - div) / g;
    }
    u.values[static_cast<std::size_t>(k)] = sum / mesh.element(k).area;
  }
  return u;
}

ScalarField recover_u(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                      Recovery recovery) {
  return recovery == Recovery::first ? recover_u_first(flux, mesh, problem)
                                     : recover_u_second(flux, mesh, problem);
}

double ls_functional(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                     Formulation formulation, int quad_degree) {
  check_binding(flux, mesh);
  const QuadratureRule& rule = quadrature(quad_degree);
  std::vector<QuadPoint> pts;
  double total = 0.0;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), rule, problem.cut(), pts);
    const double div = eval_flux_div(flux, mesh, k);
    double local = 0.0;
    for (const QuadPoint& q : pts) {
      const Vec2 s = eval_flux(flux, mesh, k, q.x);
      const Vec2 b = problem.beta(q.x);
      const double g = problem.gamma(q.x);
      const double f = problem.f(q.x, q.region);
      if (formulation == Formulation::ls1) {
        const double b2 = norm2(b);
        if (!(std::sqrt(b2) >= kTiny)) degenerate("|beta| < 1e-14 in the ls1 functional", problem, q.x);
        const double r = div + (g / b2) * dot(b, s) - f;
        const double p = dot(s, beta_perp(b));
        local += q.weight * (r * r + p * p);
      } else {
        local += q.weight * norm2(g * s + (div - f) * b);
      }
    }
    total += local;
  }
  return total;
}

double l2_error_u(const ScalarField& u, const Mesh& mesh, const ProblemSpec& problem, int quad_degree) {
  check_binding(u, mesh);
  if (!problem.has_exact()) throw ProblemError(problem.name + ": no exact solution for the u error");
  const QuadratureRule& rule = quadrature(quad_degree);
  std::vector<QuadPoint> pts;
  double total = 0.0;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), rule, problem.cut(), pts);
    const double uh = u.values[static_cast<std::size_t>(k)];
    double local = 0.0;
    for (const QuadPoint& q : pts) {
      const double d = problem.exact_u(q.x, q.region) - uh;
      local += q.weight * d * d;
    }
    total += local;
  }
  return std::sqrt(total);
}

NormReport error_norms(const FluxField& flux, const std::vector<RecoveredField>& u_fields,
                       const Mesh& mesh, const ProblemSpec& problem, int quad_degree) {
  check_binding(flux, mesh);
  NormReport r;
  if (problem.allow_ls1) r.ls1_norm = std::sqrt(ls_functional(flux, mesh, problem, Formulation::ls1, quad_degree));
  if (problem.allow_ls2) r.ls2_norm = std::sqrt(ls_functional(flux, mesh, problem, Formulation::ls2, quad_degree));
  if (!problem.has_exact()) return r;

  const QuadratureRule& rule = quadrature(quad_degree);
  std::vector<QuadPoint> pts;
  double l2 = 0.0;
  double l2div = 0.0;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), rule, problem.cut(), pts);
    const double div = eval_flux_div(flux, mesh, k);
    double a = 0.0;
    double b = 0.0;
    for (const QuadPoint& q : pts) {
      const ExactFlux ex = exact_sigma(problem, q.x, q.region);
      a += q.weight * norm2(ex.sigma - eval_flux(flux, mesh, k, q.x));
      b += q.weight * (ex.div - div) * (ex.div - div);
    }
    l2 += a;
    l2div += b;
  }
  r.l2_sigma = std::sqrt(l2);
  r.l2_div_sigma = std::sqrt(l2div);
  r.hdiv_sigma = std::sqrt(l2 + l2div);
  for (const RecoveredField& f : u_fields) {
    const double e = l2_error_u(f.u, mesh, problem, quad_degree);
    (f.recovery == Recovery::first ? r.l2_u_first : r.l2_u_second) = e;
  }
  return r;
}

std::vector<TraceSample> outflow_trace(const ScalarField& u, const Mesh& mesh, const TraceSelector& selector) {
  check_binding(u, mesh);
  std::vector<TraceSample> out;
  if (selector.kind == TraceSelector::Kind::radial) {
    out.reserve(u.values.size());
    for (Index k = 0; k < mesh.num_elements(); ++k) {
      out.push_back({norm(mesh.centroid(k)), u.values[static_cast<std::size_t>(k)]});
    }
  } else {
    for (const Edge& e : mesh.edges()) {
      if (!e.is_boundary()) continue;
      const Vec2 a = mesh.vertex(e.endpoints[0]).pos;
      const Vec2 b = mesh.vertex(e.endpoints[1]).pos;
      if (std::abs(a.y - selector.value) > 1e-12 || std::abs(b.y - selector.value) > 1e-12) continue;
      out.push_back({0.5 * (a.x + b.x), u.values[static_cast<std::size_t>(e.adjacent[0])]});
    }
  }
  if (out.empty()) throw FieldError("trace selector matched no elements");
  std::stable_sort(out.begin(), out.end(), [](const TraceSample& p, const TraceSample& q) { return p.x < q.x; });
  return out;
}

double overshoot_value(const ScalarField& u, const Mesh& mesh, const ProblemSpec& problem) {
  if (!problem.overshoot) throw ProblemError(problem.name + ": no overshoot window declared");
  const OvershootWindow& w = *problem.overshoot;
  double worst = 0.0;
  for (const TraceSample& s : outflow_trace(u, mesh, w.selector)) {
    worst = std::max({worst, s.value - w.upper, w.lower - s.value});
  }
  return worst;
}

}  // namespace lsfem
