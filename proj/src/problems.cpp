#include "lsfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

using std::numbers::pi;

ScalarFn constant(double c) {
  return [c](Vec2) { return c; };
}

VectorFn constant(Vec2 c) {
  return [c](Vec2) { return c; };
}

/// Boundary data taken from the exact solution.
ScalarFn trace_of(const ProblemSpec& p) {
  auto u = p.exact_u;
  auto disc = p.discontinuity;
  return [u, disc](Vec2 x) { return u(x, disc ? disc->side(x) : 0); };
}

void on_unit_square(ProblemSpec& p, const ProblemParams& params) {
  p.domain = "unit_square";
  p.domain_area = 1.0;
  p.mesh_name = "aligned_square";
  p.mesh_params.n = params.aligned_n;
}

ProblemSpec ex51(const ProblemParams& params) {
  ProblemSpec p;
  p.name = "ex51";
  on_unit_square(p, params);
  p.beta = constant(Vec2{1.0, 1.0} / std::sqrt(2.0));
  p.gamma = constant(1.0);
  p.exact_u = [](Vec2, int r) { return r >= 0 ? 1.0 : 0.0; };
  p.f = p.exact_u;
  p.discontinuity = Interface::line({0.0, 0.0}, {1.0, 1.0});
  p.g = trace_of(p);
  return p;
}

ProblemSpec ex52(const ProblemParams& params) {
  ProblemSpec p;
  p.name = "ex52";
  on_unit_square(p, params);
  p.beta = constant(Vec2{1.0, 1.0});
  p.gamma = constant(1.0);
  p.exact_u = [](Vec2 x, int) { return std::sin(x.x + x.y); };
  p.f = [](Vec2 x, int) { return 2.0 * std::cos(x.x + x.y) + std::sin(x.x + x.y); };
  p.g = trace_of(p);
  return p;
}

ProblemSpec ex53(const ProblemParams& params) {
  ProblemSpec p;
  p.name = "ex53_peterson";
  p.domain = "unit_square";
  p.domain_area = 1.0;
  p.mesh_name = "peterson";
  p.mesh_params.h = params.peterson_h;
  p.regenerate_for_uniform = true;
  p.beta = constant(Vec2{0.0, 1.0});
  p.gamma = constant(0.0);
  p.f = [](Vec2, int) { return 0.0; };
  p.exact_u = [](Vec2 x, int) { return x.x; };
  p.g = trace_of(p);
  p.allow_ls2 = false;
  return p;
}

ProblemSpec ex54(const ProblemParams& params) {
  ProblemSpec p;
  p.name = "ex54";
  on_unit_square(p, params);
  p.beta = constant(Vec2{1.0, 1.0} / std::sqrt(2.0));
  p.gamma = constant(1.0);
  p.exact_u = [](Vec2 x, int r) { return r >= 0 ? std::sin(x.x + x.y) : std::cos(x.x + x.y); };
  p.f = [](Vec2 x, int r) {
    const double s = x.x + x.y;
    return r >= 0 ? std::sqrt(2.0) * std::cos(s) + std::sin(s)
                  : -std::sqrt(2.0) * std::sin(s) + std::cos(s);
  };
  p.discontinuity = Interface::line({0.0, 0.0}, {1.0, 1.0});
  p.g = trace_of(p);
  return p;
}

ProblemSpec ex55(const ProblemParams&) {
  ProblemSpec p;
  p.name = "ex55";
  p.domain = "rectangle_2x1";
  p.domain_area = 2.0;
  p.mesh_name = "split_rectangle";
  p.beta = constant(Vec2{0.0, 1.0});
  p.gamma = constant(1.0);
  p.f = [](Vec2, int) { return 1.0; };
  // Side +1 of the vertical line through (pi/3, 0) is x < pi/3.
  p.exact_u = [](Vec2 x, int r) { return r >= 0 ? 1.0 - std::exp(-x.y) : 1.0; };
  p.discontinuity = Interface::line({pi / 3.0, 0.0}, {pi / 3.0, 1.0});
  p.g = trace_of(p);
  p.overshoot = OvershootWindow{1.0 - std::exp(-1.0), 1.0,
                                {TraceSelector::Kind::boundary_line_y, 1.0}};
  return p;
}

ProblemSpec ex56(const ProblemParams& params) {
  ProblemSpec p;
  p.name = "ex56";
  on_unit_square(p, params);
  const double c = std::cos(0.125);
  const double s = std::sin(0.125);
  p.beta = constant(Vec2{c, s});
  p.gamma = constant(1.0);
  p.exact_u = [](Vec2 x, int r) { return r >= 0 ? std::sin(x.x + x.y) : std::cos(x.x + x.y); };
  p.f = [c, s](Vec2 x, int r) {
    const double t = x.x + x.y;
    return r >= 0 ? (c + s) * std::cos(t) + std::sin(t) : -(c + s) * std::sin(t) + std::cos(t);
  };
  p.discontinuity = Interface::line({0.0, 0.0}, {1.0, std::tan(0.125)});
  p.g = trace_of(p);
  return p;
}

ProblemSpec ex57(const ProblemParams&) {
  ProblemSpec p;
  p.name = "ex57_curved";
  p.domain = "half_disk";
  p.domain_area = pi / 2.0;
  p.curved_boundary = true;
  p.mesh_name = "half_disk";
  p.beta = [](Vec2 x) {
    const double r = norm(x);
    return Vec2{x.y / r, -x.x / r};
  };
  p.gamma = constant(0.0);
  p.f = [](Vec2, int) { return 0.0; };
  p.exact_u = [](Vec2, int r) { return r >= 0 ? 1.0 : 0.0; };
  p.discontinuity = Interface::circle({0.0, 0.0}, 0.5);
  p.g = trace_of(p);
  p.overshoot = OvershootWindow{0.0, 1.0, {TraceSelector::Kind::radial, 0.0}};
  p.allow_ls2 = false;
  return p;
}

ProblemSpec ex58(const ProblemParams& params) {
  if (!(params.epsilon > 0.0)) throw ProblemError("ex58_layer: epsilon must be positive");
  ProblemSpec p;
  p.name = "ex58_layer";
  on_unit_square(p, params);
  const double gamma = 0.1;
  const double eps = params.epsilon;
  p.epsilon = eps;
  p.beta = [](Vec2 x) {
    const Vec2 d{x.y + 1.0, -x.x};
    return d / norm(d);
  };
  p.gamma = constant(gamma);
  p.f = [](Vec2, int) { return 0.0; };
  p.exact_u = [gamma, eps](Vec2 x, int) {
    const double r = std::hypot(x.x, x.y + 1.0);
    return 0.25 * std::exp(gamma * r * std::asin((x.y + 1.0) / r)) * std::atan((r - 1.5) / eps);
  };
  // Only used to split cut elements during quadrature.
  p.discontinuity = Interface::circle({0.0, -1.0}, 1.5);
  p.g = trace_of(p);
  return p;
}

}  // namespace

std::string_view to_string(Formulation f) { return f == Formulation::ls1 ? "ls1" : "ls2"; }
std::string_view to_string(Recovery r) { return r == Recovery::first ? "first" : "second"; }

Formulation parse_formulation(std::string_view s) {
  if (s == "ls1") return Formulation::ls1;
  if (s == "ls2") return Formulation::ls2;
  throw ConfigError("unknown formulation '" + std::string(s) + "' (expected ls1 or ls2)");
}

Recovery parse_recovery(std::string_view s) {
  if (s == "first") return Recovery::first;
  if (s == "second") return Recovery::second;
  throw ConfigError("unknown recovery '" + std::string(s) + "' (expected first or second)");
}

std::vector<std::string> catalog_names() {
  return {"ex51", "ex52", "ex53_peterson", "ex54", "ex55", "ex56", "ex57_curved", "ex58_layer"};
}

ProblemSpec builtin(std::string_view name, const ProblemParams& params) {
  if (name == "ex51") return ex51(params);
  if (name == "ex52") return ex52(params);
  if (name == "ex53_peterson") return ex53(params);
  if (name == "ex54") return ex54(params);
  if (name == "ex55") return ex55(params);
  if (name == "ex56") return ex56(params);
  if (name == "ex57_curved") return ex57(params);
  if (name == "ex58_layer") return ex58(params);
  throw ProblemError("unknown problem '" + std::string(name) + "'");
}

Vec2 beta_perp(Vec2 beta) {
  const double n = norm(beta);
  if (!(n > 0.0)) throw ProblemError("beta_perp: zero vector");
  return Vec2{-beta.y, beta.x} / n;
}

ExactFlux exact_sigma(const ProblemSpec& problem, Vec2 x, int region) {
  if (!problem.has_exact()) throw ProblemError(problem.name + ": no exact solution");
  const double u = problem.exact_u(x, region);
  return {problem.beta(x) * u, problem.f(x, region) - problem.gamma(x) * u};
}

ExactFlux exact_sigma(const ProblemSpec& problem, Vec2 x) {
  const int region = problem.region(x);
  if (problem.discontinuity && region == 0) {
    throw ProblemError(problem.name + ": exact flux requested on the discontinuity at (" +
                       std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
  }
  return exact_sigma(problem, x, region);
}

Mesh initial_mesh(const ProblemSpec& problem) {
  return classify_boundary(generate_initial_mesh(problem.mesh_name, problem.mesh_params),
                           problem.beta);
}

}  // namespace lsfem
