#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lsfem/mesh.hpp"
#include "lsfem/problems.hpp"
#include "lsfem/quadrature.hpp"

namespace lsfem {

inline constexpr int kDefaultAssemblyDegree = 4;

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Euler-Lagrange system over the free (non-inflow) edge dofs. Inflow dofs
/// are prescribed and folded into the right-hand side.
struct LinearSystem {
  SparseMatrix matrix;  // full symmetric storage
  Eigen::VectorXd rhs;
  std::vector<Index> free_to_edge;
  std::vector<Index> edge_to_free;  // kNone for constrained edges
  std::vector<std::pair<Index, double>> constrained;  // (edge, prescribed dof), edge order
  int mesh_generation = 0;
  Formulation formulation = Formulation::ls1;
  std::vector<std::string> warnings;

  Index num_free() const { return static_cast<Index>(free_to_edge.size()); }
};

/// Element matrix and load vector in local edge order.
struct LocalSystem {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d load = Eigen::Vector3d::Zero();
};

LocalSystem local_system(const Mesh& mesh, Index element, const ProblemSpec& problem,
                         Formulation formulation, const QuadratureRule& rule);

LinearSystem assemble(const Mesh& mesh, const ProblemSpec& problem, Formulation formulation,
                      int quad_degree = kDefaultAssemblyDegree);

/// Integral of (beta . n) g over the edge with 5-point Gauss.
double inflow_dof_value(const Mesh& mesh, const Edge& edge, const ProblemSpec& problem);

}  // namespace lsfem
