#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "equispec/problem.hpp"

namespace equispec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete form T and mass form on the free (non-Dirichlet) vertices.
struct Assembly {
  SparseMatrix K;  // T(phi_i, phi_j)
  SparseMatrix M;  // consistent P1 mass
  std::vector<int> free_index;     // vertex -> row, -1 when constrained
  std::vector<int> free_vertices;  // row -> vertex
  int vertex_count = 0;
  double shift = 1.0;            // K + shift M is positive definite
  double trace_constant = 0.0;   // heuristic C_tr entering the shift
  double max_potential = 0.0;
  double max_robin = 0.0;

  int size() const { return static_cast<int>(free_vertices.size()); }
  Eigen::VectorXd restrict_to_free(const std::vector<double>& values) const;
  std::vector<double> extend(const Eigen::VectorXd& free_values) const;
};

/// Assembles over all vertices, Dirichlet rows kept. Used for invariance
/// checks and by the Montiel-Ros extension test.
void assemble_full(const ProblemSpec& p, SparseMatrix& K, SparseMatrix& M);

Assembly assemble(const ProblemSpec& p);

/// Dirichlet-constrained vertex flags.
std::vector<char> dirichlet_vertices(const SurfaceMesh& mesh);

/// T(u,u) / <u,u>_M for per-vertex samples vanishing on Dirichlet vertices.
double rayleigh(const Assembly& a, const std::vector<double>& values);

}  // namespace equispec
