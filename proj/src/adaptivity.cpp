#include "lsfem/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lsfem/error.hpp"
#include "lsfem/integration.hpp"
#include "lsfem/quadrature.hpp"

namespace lsfem {

double IndicatorField::sum_of_squares() const {
  double s = 0.0;
  for (double e : eta) s += e * e;
  return s;
}

double IndicatorField::global() const { return std::sqrt(sum_of_squares()); }

IndicatorField indicators(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                          Formulation formulation, int quad_degree) {
  check_binding(flux, mesh);
  const QuadratureRule& rule = quadrature(quad_degree);
  IndicatorField ind;
  ind.mesh_generation = mesh.generation();
  ind.formulation = formulation;
  ind.eta.resize(static_cast<std::size_t>(mesh.num_elements()));
  std::vector<QuadPoint> pts;
  for (const Element& el : mesh.elements()) {
    pts.clear();
    integration_points(mesh.corners(el.id), rule, problem.cut(), pts);
    const double div = eval_flux_div(flux, mesh, el.id);
    double s = 0.0;
    for (const QuadPoint& q : pts) {
      const Vec2 b = problem.beta(q.x);
      const double gamma = problem.gamma(q.x);
      const double f = problem.f(q.x, q.region);
      const Vec2 sigma = eval_flux(flux, mesh, el.id, q.x);
      if (formulation == Formulation::ls1) {
        const double b2 = norm2(b);
        if (!(std::sqrt(b2) >= 1e-14)) {
          throw AssemblyError(problem.name + ": |beta| < 1e-14 in element " + std::to_string(el.id));
        }
        const double residual = div + gamma / b2 * dot(b, sigma) - f;
        const double along = dot(sigma, beta_perp(b));
        s += q.weight * (residual * residual + along * along);
      } else {
        const Vec2 residual = gamma * sigma + b * (div - f);
        s += q.weight * dot(residual, residual);
      }
    }
    ind.eta[static_cast<std::size_t>(el.id)] = std::sqrt(s);
  }
  return ind;
}

std::vector<Index> dorfler_mark(std::span<const double> eta, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  std::vector<Index> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return eta[static_cast<std::size_t>(a)] > eta[static_cast<std::size_t>(b)];
  });
  double total = 0.0;
  for (Index k : order) total += eta[static_cast<std::size_t>(k)] * eta[static_cast<std::size_t>(k)];
  const double target = theta * total;
  std::vector<Index> marked;
  double acc = 0.0;
  for (Index k : order) {
    if (acc >= target) break;
    const double e = eta[static_cast<std::size_t>(k)];
    if (!(e > 0.0)) break;
    marked.push_back(k);
    acc += e * e;
  }
  return marked;
}

std::vector<Index> dorfler_mark(const IndicatorField& ind, double theta) { return dorfler_mark(ind.eta, theta); }

Index free_dof_count(const Mesh& mesh) {
  Index n = 0;
  for (const Edge& e : mesh.edges()) n += e.bclass == BoundaryClass::inflow ? 0 : 1;
  return n;
}

double estimator_floor(const Mesh& mesh, const ProblemSpec& problem) {
  const QuadratureRule& rule = quadrature(kDefaultNormDegree);
  std::vector<QuadPoint> pts;
  double s = 0.0;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    pts.clear();
    integration_points(mesh.corners(k), rule, problem.cut(), pts);
    for (const QuadPoint& q : pts) {
      const double f = problem.f(q.x, q.region);
      s += q.weight * f * f;
    }
  }
  return 1e-10 * std::max(1.0, std::sqrt(s));
}

void check_variant(const ProblemSpec& problem, Formulation formulation, Recovery recovery) {
  if (!problem.allows(formulation)) {
    throw ConfigError(problem.name + " does not admit formulation " + std::string(to_string(formulation)) +
                      (formulation == Formulation::ls2 ? " (gamma = 0 makes it singular)" : ""));
  }
  if (!problem.allows(recovery)) {
    throw ConfigError(problem.name + " does not admit the " + std::string(to_string(recovery)) +
                      " recovery" + (recovery == Recovery::second ? " (gamma = 0)" : " (beta = 0)"));
  }
}

namespace {

struct StepResult {
  FluxField flux;
  ScalarField u;
  IndicatorField ind;
  ConvergenceRecord record;
};

StepResult solve_step(const Mesh& mesh, const ProblemSpec& problem, const StudyOptions& opt, int step) {
  StepResult r;
  try {
    const LinearSystem sys = assemble(mesh, problem, opt.formulation, opt.quad_degree);
    FluxSolution sol = solve_spd(sys, opt.solver, opt.tol);
    r.flux = std::move(sol.flux);
    r.u = recover_u(r.flux, mesh, problem, opt.recovery);
    r.ind = indicators(r.flux, mesh, problem, opt.formulation, opt.norm_degree);

    ConvergenceRecord& rec = r.record;
    rec.step = step;
    rec.dofs = sys.num_free();
    rec.elements = mesh.num_elements();
    rec.h_max = mesh.h_max();
    rec.eta = r.ind.global();
    rec.solve = sol.report;
    rec.err_ls = std::sqrt(ls_functional(r.flux, mesh, problem, opt.formulation, opt.norm_degree));
    if (problem.has_exact()) {
      const NormReport n = error_norms(r.flux, {{opt.recovery, r.u}}, mesh, problem, opt.norm_degree);
      rec.err_l2_u = n.l2_u(opt.recovery);
      rec.err_hdiv = n.hdiv_sigma;
      rec.err_l2_sigma = n.l2_sigma;
    }
    if (problem.overshoot) rec.overshoot = overshoot_value(r.u, mesh, problem);
  } catch (const Error& e) {
    throw Error("step " + std::to_string(step) + ": " + e.what());
  }
  return r;
}

}  // namespace

std::vector<ConvergenceRecord> adapt_loop(const ProblemSpec& problem, const StudyOptions& options,
                                          const StepObserver& observer) {
  check_variant(problem, options.formulation, options.recovery);
  Mesh mesh = initial_mesh(problem);
  const double floor = estimator_floor(mesh, problem);
  std::vector<ConvergenceRecord> history;
  for (int step = 0;; ++step) {
    StepResult s = solve_step(mesh, problem, options, step);
    history.push_back(s.record);
    const bool done = s.record.dofs >= options.dof_budget || s.record.eta <= floor ||
                      step + 1 >= options.max_steps;
    std::vector<Index> marked;
    if (!done) marked = dorfler_mark(s.ind, options.theta);
    if (observer) observer(StepState{mesh, s.flux, s.u, s.ind, marked, history.back()});
    if (done || marked.empty()) break;
    mesh = classify_boundary(bisect(mesh, marked), problem.beta);
  }
  return history;
}

std::vector<ConvergenceRecord> uniform_study(const ProblemSpec& problem, const StudyOptions& options,
                                             const StepObserver& observer) {
  check_variant(problem, options.formulation, options.recovery);
  Mesh mesh = initial_mesh(problem);
  std::vector<ConvergenceRecord> history;
  const std::vector<Index> none;
  for (int level = 0;; ++level) {
    if (options.levels ? level > *options.levels : free_dof_count(mesh) > options.dof_budget) break;
    StepResult s = solve_step(mesh, problem, options, level);
    history.push_back(s.record);
    if (observer) observer(StepState{mesh, s.flux, s.u, s.ind, none, history.back()});
    if (level + 1 >= options.max_steps) break;
    if (problem.regenerate_for_uniform) {
      MeshParams p = problem.mesh_params;
      p.h = problem.mesh_params.h / std::pow(2.0, level + 1);
      mesh = classify_boundary(generate_initial_mesh(problem.mesh_name, p), problem.beta);
    } else {
      mesh = classify_boundary(uniform_refine(mesh), problem.beta);
    }
  }
  if (history.empty()) {
    throw ConfigError("budget " + std::to_string(options.dof_budget) +
                      " is below the initial mesh's free-dof count " +
                      std::to_string(free_dof_count(initial_mesh(problem))));
  }
  return history;
}

}  // namespace lsfem
