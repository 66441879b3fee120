#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lsfem/assembly.hpp"
#include "lsfem/mesh.hpp"
#include "lsfem/postprocess.hpp"
#include "lsfem/problems.hpp"
#include "lsfem/rt0.hpp"
#include "lsfem/solver.hpp"

namespace lsfem {

struct IndicatorField {
  int mesh_generation = 0;
  Formulation formulation = Formulation::ls1;
  std::vector<double> eta;

  double sum_of_squares() const;
  double global() const;
};

/// Element residuals of the least-squares functional; their squares sum to
/// J_i(flux; f, g).
IndicatorField indicators(const FluxField& flux, const Mesh& mesh, const ProblemSpec& problem,
                          Formulation formulation, int quad_degree = kDefaultNormDegree);

/// Smallest set, taken greedily by decreasing eta (ties by lower id), whose
/// eta^2 mass reaches theta times the total. Returned in selection order.
std::vector<Index> dorfler_mark(std::span<const double> eta, double theta);
std::vector<Index> dorfler_mark(const IndicatorField& ind, double theta);

struct ConvergenceRecord {
  int step = 0;
  Index dofs = 0;  // free dofs
  Index elements = 0;
  double h_max = 0.0;
  double eta = 0.0;
  std::optional<double> err_ls;
  std::optional<double> err_l2_u;
  std::optional<double> err_hdiv;
  std::optional<double> err_l2_sigma;
  std::optional<double> overshoot;
  SolveReport solve;
};

struct StudyOptions {
  Formulation formulation = Formulation::ls1;
  Recovery recovery = Recovery::first;
  double theta = 0.5;
  Index dof_budget = 100000;
  /// Uniform mode: solve exactly this many refinement levels beyond the
  /// initial mesh, ignoring the budget.
  std::optional<int> levels;
  int quad_degree = kDefaultAssemblyDegree;
  int norm_degree = kDefaultNormDegree;
  SolverMethod solver = SolverMethod::automatic;
  double tol = 1e-12;
  int max_steps = 500;
};

struct StepState {
  const Mesh& mesh;
  const FluxField& flux;
  const ScalarField& u;
  const IndicatorField& eta;
  std::span<const Index> marked;  // empty on the last step and in uniform mode
  const ConvergenceRecord& record;
};

using StepObserver = std::function<void(const StepState&)>;

/// Stopping floor for the estimator: 1e-10 * max(1, ||f||_0).
double estimator_floor(const Mesh& mesh, const ProblemSpec& problem);

/// Throws ConfigError when the problem does not admit the variant.
void check_variant(const ProblemSpec& problem, Formulation formulation, Recovery recovery);

/// Solve, estimate, mark, bisect until the free-dof count reaches the
/// budget or the estimator drops below the floor.
std::vector<ConvergenceRecord> adapt_loop(const ProblemSpec& problem, const StudyOptions& options,
                                          const StepObserver& observer = {});

/// Sequence of uniformly refined (or regenerated) meshes whose free-dof
/// count stays within the budget.
std::vector<ConvergenceRecord> uniform_study(const ProblemSpec& problem, const StudyOptions& options,
                                             const StepObserver& observer = {});

/// Number of edges that are not inflow edges.
Index free_dof_count(const Mesh& mesh);

}  // namespace lsfem
