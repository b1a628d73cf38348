#include "equispec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "equispec/error.hpp"

namespace equispec {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

void fill_residuals(const Sparse& K, const Sparse& M, EigenResult& r) {
  r.residuals.resize(r.values.size());
  for (Eigen::Index i = 0; i < r.values.size(); ++i) {
    const Eigen::VectorXd mu = M * r.vectors.col(i);
    r.residuals[i] = (K * r.vectors.col(i) - r.values[i] * mu).norm() / mu.norm();
  }
}

EigenResult dense_solve(const Sparse& K, const Sparse& M, int count) {
  const Eigen::MatrixXd Kd(K), Md(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  if (es.info() != Eigen::Success) throw NotConverged("dense generalized eigensolver failed", INFINITY);
  EigenResult r;
  r.values = es.eigenvalues().head(count);
  r.vectors = es.eigenvectors().leftCols(count);
  r.method = "dense";
  return r;
}

// M-orthonormal basis of span(Y), dropping numerically dependent directions.
Eigen::MatrixXd m_orthonormalize(const Eigen::MatrixXd& Y, const Sparse& M) {
  const Eigen::MatrixXd MY = M * Y;
  Eigen::MatrixXd G = Y.transpose() * MY;
  G = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const Eigen::VectorXd d = es.eigenvalues();
  const double cut = 1e-13 * d.cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d[i] > cut) keep.push_back(static_cast<int>(i));
  Eigen::MatrixXd Q(Y.rows(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j)
    Q.col(j) = Y * es.eigenvectors().col(keep[j]) / std::sqrt(d[keep[j]]);
  // second pass cleans rounding from ill-conditioned blocks
  Eigen::MatrixXd G2 = Q.transpose() * (M * Q);
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (G2 + G2.transpose()));
  if (llt.info() == Eigen::Success) Q = llt.matrixU().solve<Eigen::OnTheRight>(Q);
  return Q;
}

constexpr double kBackwardTol = 1e-13;

double max_row_sum(const Sparse& A) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(A.rows());
  for (Eigen::Index c = 0; c < A.outerSize(); ++c)
    for (Sparse::InnerIterator it(A, c); it; ++it) s[it.row()] += std::abs(it.value());
  return s.size() ? s.maxCoeff() : 0.0;
}

}  // namespace

EigenResult solve_generalized(const Sparse& K, const Sparse& M, const EigenOptions& opts) {
  const int n = static_cast<int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) throw InvalidInput("matrix size mismatch");
  if (opts.count < 0 || opts.count > n) throw InvalidInput("requested more eigenvalues than degrees of freedom");
  EigenResult r;
  if (opts.count == 0 || n == 0) {
    r.values.resize(0);
    r.vectors.resize(n, 0);
    r.method = "empty";
    return r;
  }
  const int block = std::min(n, std::max(2 * opts.count, opts.count + 16));
  if (n <= opts.dense_limit || 2 * block >= n) {
    r = dense_solve(K, M, opts.count);
    fill_residuals(K, M, r);
    return r;
  }

  const Sparse S = K + opts.shift * M;
  Eigen::SimplicialLDLT<Sparse> ldlt(S);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all())
    throw InvalidInput("shifted operator K + shift M is not positive definite");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd Y(n, block);
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < n; ++i) Y(i, j) = normal(rng);

  // Backward-error floor: on fine meshes |K| / |M| grows like h^-2 and the
  // plain residual stalls near eps |K| / |M| long before tol.
  const double k_norm = max_row_sum(K), m_norm = max_row_sum(M);
  double worst = INFINITY;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Eigen::MatrixXd Z = ldlt.solve(M * Y);
    Eigen::MatrixXd Q = m_orthonormalize(Z, M);
    while (Q.cols() < block) {
      // lost rank: top up with fresh random directions
      Eigen::MatrixXd extra(n, block - Q.cols());
      for (Eigen::Index j = 0; j < extra.cols(); ++j)
        for (Eigen::Index i = 0; i < n; ++i) extra(i, j) = normal(rng);
      Eigen::MatrixXd joined(n, block);
      joined << Q, extra;
      Q = m_orthonormalize(joined, M);
    }
    Eigen::MatrixXd A = Q.transpose() * (K * Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    Y = Q * es.eigenvectors();

    r.values = es.eigenvalues().head(opts.count);
    r.vectors = Y.leftCols(opts.count);
    fill_residuals(K, M, r);
    worst = 0.0;
    for (int i = 0; i < opts.count; ++i) {
      const double rel = r.residuals[i] / (opts.tol * std::max(1.0, std::abs(r.values[i])));
      const double mu = (M * r.vectors.col(i)).norm(), un = r.vectors.col(i).norm();
      const double backward = r.residuals[i] * mu / ((k_norm + std::abs(r.values[i]) * m_norm) * un);
      worst = std::max(worst, std::min(rel, backward / kBackwardTol));
    }
    if (worst <= 1.0) {
      r.iterations = it;
      r.method = "subspace_iteration";
      return r;
    }
  }
  std::ostringstream msg;
  msg << "subspace iteration did not converge in " << opts.max_iterations << " iterations; residuals:";
  for (double v : r.residuals) msg << ' ' << v;
  throw NotConverged(msg.str(), worst * opts.tol);
}

}  // namespace equispec
