#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace equispec {

struct EigenOptions {
  int count = 6;
  double shift = 1.0;        // K + shift M must be positive definite
  std::uint64_t seed = 0;    // starting subspace
  double tol = 1e-10;        // residual / (|M u| max(1,|lambda|)); a normwise
                             // backward error of 1e-13 also counts
  int max_iterations = 2000;
  int dense_limit = 600;     // dense solver at or below this size
};

struct EigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
  std::vector<double> residuals;  // |K u - lambda M u| / |M u|
  int iterations = 0;
  std::string method;
};

/// Lowest eigenpairs of K u = lambda M u. Large problems use block
/// shift-invert subspace iteration on (K + shift M)^{-1} M with
/// Rayleigh-Ritz; throws NotConverged when the budget runs out.
EigenResult solve_generalized(const Eigen::SparseMatrix<double>& K, const Eigen::SparseMatrix<double>& M,
                              const EigenOptions& opts);

}  // namespace equispec
