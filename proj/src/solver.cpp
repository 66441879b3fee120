#include "lsfem/solver.hpp"

#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "lsfem/error.hpp"

namespace lsfem {

namespace {

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - a * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

VectorSolution direct(const SparseMatrix& a, const Eigen::VectorXd& b) {
  Eigen::SimplicialLLT<SparseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SolverError("sparse Cholesky factorization failed: matrix is not positive definite "
                      "(formulation or boundary-condition error)");
  }
  VectorSolution s;
  s.x = llt.solve(b);
  s.report = {0, relative_residual(a, s.x, b), SolverMethod::direct};
  return s;
}

VectorSolution conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index n = a.rows();
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.compute(a);
  cg.setTolerance(tol);
  const Eigen::Index cap = std::max<Eigen::Index>(10 * n, 1);
  VectorSolution s;
  s.x = Eigen::VectorXd::Zero(n);
  Eigen::Index used = 0;
  // Eigen's recurrence residual can drift from the true one; restart from the
  // current iterate until the true residual meets the tolerance.
  for (int restart = 0; restart < 8 && used < cap; ++restart) {
    cg.setMaxIterations(cap - used);
    s.x = cg.solveWithGuess(b, s.x);
    used += cg.iterations();
    if (relative_residual(a, s.x, b) <= tol) break;
    if (cg.iterations() == 0) break;
  }
  const double rr = relative_residual(a, s.x, b);
  if (!(rr <= tol)) {
    throw SolverError("cg did not converge: relative residual " + std::to_string(rr) + " after " +
                      std::to_string(used) + " iterations (tol " + std::to_string(tol) + ")");
  }
  s.report = {static_cast<int>(used), rr, SolverMethod::cg};
  return s;
}

}  // namespace

std::string_view to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::automatic: return "auto";
    case SolverMethod::direct: return "direct";
    case SolverMethod::cg: return "cg";
  }
  return "?";
}

SolverMethod parse_solver_method(std::string_view s) {
  if (s == "auto") return SolverMethod::automatic;
  if (s == "direct") return SolverMethod::direct;
  if (s == "cg") return SolverMethod::cg;
  throw ConfigError("unknown solver '" + std::string(s) + "' (expected auto, direct or cg)");
}

VectorSolution solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, SolverMethod method,
                         double tol) {
  if (!(tol > 0.0)) throw SolverError("solver tolerance must be positive");
  if (a.rows() != a.cols() || a.rows() != b.size()) throw SolverError("system dimensions do not match");
  if (a.rows() == 0) return {Eigen::VectorXd(), {0, 0.0, SolverMethod::direct}};
  if (method == SolverMethod::automatic) {
    method = a.rows() <= kDirectSolveLimit ? SolverMethod::direct : SolverMethod::cg;
  }
  return method == SolverMethod::direct ? direct(a, b) : conjugate_gradient(a, b, tol);
}

FluxSolution solve_spd(const LinearSystem& system, SolverMethod method, double tol) {
  VectorSolution v = solve_spd(system.matrix, system.rhs, method, tol);
  FluxSolution out;
  out.report = v.report;
  out.flux.mesh_generation = system.mesh_generation;
  out.flux.dofs.assign(system.edge_to_free.size(), 0.0);
  for (Index k = 0; k < system.num_free(); ++k) {
    out.flux.dofs[static_cast<std::size_t>(system.free_to_edge[static_cast<std::size_t>(k)])] = v.x[k];
  }
  for (const auto& [edge, value] : system.constrained) out.flux.dofs[static_cast<std::size_t>(edge)] = value;
  return out;
}

}  // namespace lsfem
