#pragma once

#include <random>
#include <string>
#include <vector>

#include "lsfem/adaptivity.hpp"
#include "lsfem/mesh.hpp"
#include "lsfem/problems.hpp"

namespace lsfem::testing {

Mesh single_triangle(Vec2 a = {0, 0}, Vec2 b = {1, 0}, Vec2 c = {0, 1});

/// Unit square split by the diagonal (0,0)-(1,1).
Mesh two_triangle_square();

/// Empty string when the mesh is conforming and its stored data consistent;
/// otherwise a description of the first violation. Brute force over all
/// element pairs, independent of the mesh's own edge table.
std::string conformity_violation(const Mesh& mesh);

/// Integral of phi over edge j of element k, dotted with edge j's global
/// normal, by 8-point Gauss.
double edge_flux_of_basis(const Mesh& mesh, Index element, int basis, int edge);

/// Adaptive refinement driven by the exact LS1 indicators of a problem.
std::vector<Mesh> adaptive_meshes(const ProblemSpec& problem, int generations, double theta = 0.5);

/// Solves the problem on the mesh with the given variant.
struct Solved {
  FluxField flux;
  ScalarField u;
};
Solved solve(const Mesh& mesh, const ProblemSpec& problem, Formulation f = Formulation::ls1,
             Recovery r = Recovery::first);

/// Random point strictly inside a triangle.
Vec2 random_point(const Triangle& t, std::mt19937& rng);

}  // namespace lsfem::testing
