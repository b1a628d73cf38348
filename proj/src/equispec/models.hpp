#pragma once

#include <functional>
#include <string>
#include <vector>

#include "equispec/spectral.hpp"

namespace equispec {

struct CatenoidParams {
  double a = kCatenoidA;
  double h = kCatenoidH;
  double s = kCatenoidS;
};

struct K0Profile {
  double r = 0.0;       // cosh(a z - s) / a
  double dr = 0.0;      // sinh(a z - s)
  double A2 = 0.0;      // |A|^2 = (a^2 + a^-2) / cosh^4
  double g_zeta = 0.0;  // metric diagonal: cosh^2
  double g_theta = 0.0; // r^2
};

K0Profile k0_profile(double zeta, const CatenoidParams& c = {});

/// Weighted 1D problem
///   int p f'g' - Q f g  -  right_robin f(L) g(L)  =  lambda int W f g
/// on [0, L]. Dirichlet ends are eliminated; other ends are natural.
struct SturmLiouville {
  double length = 1.0;
  std::function<double(double)> p = [](double) { return 1.0; };
  std::function<double(double)> Q = [](double) { return 0.0; };
  std::function<double(double)> W = [](double) { return 1.0; };
  bool left_dirichlet = false;
  bool right_dirichlet = false;
  double right_robin = 0.0;
  int intervals = 4000;
};

struct SLSpectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd functions;  // nodal values on the uniform grid
  std::vector<double> grid;
  std::vector<double> residuals;
};

SLSpectrum sl_solve(const SturmLiouville& problem, int count);

/// Separated Jacobi problem of K0 for angular mode ell:
///   f'' + [(a^2+a^-2)/cosh^2 - a^2 ell^2] f = -lambda cosh^2 f,
///   Robin f'(h) = cosh(ah - s) f(h); left end Neumann or Dirichlet.
SturmLiouville k0_mode_problem(int ell, bool left_dirichlet, const CatenoidParams& c = {}, int intervals = 4000);

/// Radial Laplacian on the unit disk for mode ell (Neumann at rho = 1).
SturmLiouville disk_mode_problem(int ell, int intervals = 4000);

/// Number of independent (G, sigma)-invariant functions among the angular
/// mode-ell functions {cos, sin}(ell theta): (1/|G|) sum sigma(g) tr rho_ell(g)
/// for a group of rotations about and reflections through planes containing
/// the z-axis.
int mode_multiplicity(const GroupAction& g, int ell);

struct ModeRecord {
  int ell = 0;
  int multiplicity = 0;
  std::vector<double> eigenvalues;
  int negative = 0;
  int zero = 0;
};

struct K0EquivariantIndex {
  int k = 0;
  int index = 0;
  int nullity = 0;
  std::vector<ModeRecord> modes;
};

/// Y_k-equivariant index and nullity of K0 (Neumann at the equator, Robin
/// on the sphere) by mode decomposition, with normal-sign twist.
K0EquivariantIndex k0_equivariant_index(int k, double zero_tol, const CatenoidParams& c = {},
                                        const std::string& left = "neumann");

/// Least k >= 1 whose mode-k first eigenvalue exceeds zero_tol.
int k0_k_min(double zero_tol, const CatenoidParams& c = {}, int k_max = 64);

/// K0 mesh symmetric under Y_k with the Jacobi potential and free boundary
/// Robin condition on the sphere side; `left` tags the equator.
ProblemSpec k0_problem(int level, int k, BoundaryTag left = BoundaryTag::Neumann, const CatenoidParams& c = {},
                       bool pair = false);

struct K0Certificate {
  double left_constant = 0.0;   // sqrt(2 / (a^2 + a^-2))
  double right_constant = 0.0;  // least z0 making the Robin side negative
  double robin_factor = 0.0;    // (h - z0) cosh(ah - s) - 1 at the threshold, must be < 0
  bool overlap = false;
  double lambda2 = 0.0;         // mode-0 Neumann second eigenvalue
  bool lambda2_positive = false;
  double boundary_residual = 0.0;  // r(h)^2 + h^2 - 1
};

K0Certificate k0_certificate(const CatenoidParams& c = {});

/// kappa(p) = < xi x p, nu(p) > with angle-weighted vertex normals.
std::vector<double> killing_jacobi_field(const SurfaceMesh& mesh, const Vec3& axis);

struct NodalDomains {
  int count = 0;
  std::vector<int> labels;  // per triangle, -1 for nodal carriers
  std::vector<int> signs;   // per domain
};

/// Components of {|f| > tol} over edge-adjacent triangles whose above-tol
/// vertices share a sign. tol < 0 selects 1e-6 max|f|.
NodalDomains nodal_domains(const SurfaceMesh& mesh, const std::vector<double>& values, double tol = -1.0);

/// One of the five spherical table rows (1-based) at the given level.
ProblemSpec sphere_table_problem(int row, int level, double zeta = 0.0);
std::pair<int, int> sphere_table_expected(int row);
std::string sphere_table_label(int row);

/// Unit disk with q = 0, all Neumann; n_sectors ring vertices.
ProblemSpec disk_problem(int level, int n_sectors = 8);

}  // namespace equispec
