#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lsfem/mesh.hpp"
#include "lsfem/problems.hpp"
#include "lsfem/rt0.hpp"

namespace lsfem {

inline constexpr int kDefaultNormDegree = 10;

/// Element mean of sigma_h . beta / |beta|^2.
ScalarField recover_u_first(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem);
/// Element mean of (f - div sigma_h) / gamma.
ScalarField recover_u_second(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem);
ScalarField recover_u(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                      Recovery recovery);

/// Value of the least-squares functional J_i(flux; f, g), squared units.
double ls_functional(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                     Formulation formulation, int quad_degree = kDefaultNormDegree);

struct RecoveredField {
  Recovery recovery = Recovery::first;
  ScalarField u;
};

struct NormReport {
  std::optional<double> ls1_norm;  // sqrt(J_1), when ls1 is allowed
  std::optional<double> ls2_norm;  // sqrt(J_2), when ls2 is allowed
  std::optional<double> l2_sigma;
  std::optional<double> l2_div_sigma;
  std::optional<double> hdiv_sigma;
  std::optional<double> l2_u_first;
  std::optional<double> l2_u_second;

  std::optional<double> ls_norm(Formulation f) const { return f == Formulation::ls1 ? ls1_norm : ls2_norm; }
  std::optional<double> l2_u(Recovery r) const { return r == Recovery::first ? l2_u_first : l2_u_second; }
};

/// Least-squares norms always; exact-error norms when the problem has an
/// exact solution.
NormReport error_norms(const FluxField& flux, const std::vector<RecoveredField>& u_fields,
                       const Mesh& mesh, const ProblemSpec& problem,
                       int quad_degree = kDefaultNormDegree);

/// ||u - u_h||_0 for a P0 field; requires an exact solution.
double l2_error_u(const ScalarField& u, const Mesh& mesh, const ProblemSpec& problem,
                  int quad_degree = kDefaultNormDegree);

struct TraceSample {
  double x = 0.0;
  double value = 0.0;
};

/// One sample per selected element, sorted by coordinate.
std::vector<TraceSample> outflow_trace(const ScalarField& u, const Mesh& mesh, const TraceSelector& selector);

/// Largest excursion of the trace outside the problem's overshoot window,
/// floored at zero.
double overshoot_value(const ScalarField& u, const Mesh& mesh, const ProblemSpec& problem);

}  // namespace lsfem
