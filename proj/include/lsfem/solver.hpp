#pragma once

#include <string_view>

#include <Eigen/Core>

#include "lsfem/assembly.hpp"
#include "lsfem/rt0.hpp"

namespace lsfem {

enum class SolverMethod { automatic, direct, cg };

std::string_view to_string(SolverMethod m);
SolverMethod parse_solver_method(std::string_view s);

/// Free-dof count above which automatic selection switches to cg.
inline constexpr Index kDirectSolveLimit = 1000000;

struct SolveReport {
  int iterations = 0;  // 0 for direct
  double relative_residual = 0.0;
  SolverMethod method = SolverMethod::direct;
};

struct VectorSolution {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Solves A x = b for a symmetric positive definite A. Direct factorization
/// failure or cg stagnation throws SolverError.
VectorSolution solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b,
                         SolverMethod method = SolverMethod::automatic, double tol = 1e-12);

struct FluxSolution {
  FluxField flux;
  SolveReport report;
};

/// Solves the system and re-attaches the prescribed inflow dofs.
FluxSolution solve_spd(const LinearSystem& system, SolverMethod method = SolverMethod::automatic,
                       double tol = 1e-12);

}  // namespace lsfem
