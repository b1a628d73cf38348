#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equispec/assembly.hpp"
#include "equispec/symmetry.hpp"

namespace equispec {

/// Lowest eigenpairs of a discrete form with solver metadata.
struct Spectrum {
  std::vector<double> eigenvalues;      // nondecreasing
  Eigen::MatrixXd eigenfunctions;       // vertex samples, one column per eigenvalue
  std::vector<double> residuals;
  double shift = 0.0;
  double trace_constant = 0.0;
  int level = 0;
  std::string subspace = "plain";  // plain | projected | reduced
  std::string group;               // group name when equivariant
  std::vector<int> twist;
  int dimension = 0;     // size of the discrete space searched
  bool complete = false; // every eigenvalue of that space is listed
  int iterations = 0;
  std::string method;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

struct SolveOptions {
  int count = 6;
  std::uint64_t seed = 0;  // 0: derive from the problem hash
  int dense_limit = 600;
};

Spectrum solve(const ProblemSpec& p, const SolveOptions& opts = {});
Spectrum solve(const Assembly& a, const SolveOptions& opts, std::uint64_t problem_seed, int level);

enum class Strategy { ProjectedSubspace, FundamentalDomain };

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

/// (G, sigma)-eigenvalues. `group` must act on p.mesh. Eigenfunctions are
/// returned on the parent mesh for both strategies.
Spectrum solve_equivariant(const ProblemSpec& p, const GroupAction& group, const SolveOptions& opts,
                           Strategy strategy = Strategy::ProjectedSubspace);

/// Orbit basis of the (G, sigma)-invariant functions over free vertices
/// (columns in free coordinates of `a`).
SparseMatrix invariant_basis(const GroupAction& group, const Assembly& a);

struct IndexNullity {
  int index = 0;
  int nullity = 0;
  double margin = 0.0;  // min_i | |lambda_i| - zero_tol |
};

/// Throws InsufficientSpectrum unless the spectrum reaches past zero_tol.
IndexNullity index_nullity(const Spectrum& s, double zero_tol);

/// Repeats the solve with doubled count until the last eigenvalue exceeds
/// `above` or the spectrum is complete.
Spectrum solve_covering(const ProblemSpec& p, double above, SolveOptions opts, const GroupAction* group = nullptr,
                        Strategy strategy = Strategy::ProjectedSubspace);

struct ConvergenceRow {
  int index = 0;                // 1-based eigenvalue index
  std::vector<double> values;   // per level
  double extrapolated = 0.0;
  double order = 0.0;
  double error_bar = 0.0;
  bool order_assumed = false;   // observed order unusable, 2 assumed
  bool crossing = false;        // extrapolation suppressed
  double overlap = 1.0;         // worst eigenfunction overlap between levels
};

struct ConvergenceStudy {
  std::vector<int> levels;
  std::vector<double> mesh_sizes;
  std::vector<ConvergenceRow> rows;
  std::vector<Spectrum> spectra;
};

/// Equivariant setting re-realized on each refined mesh.
struct EquivariantSetup {
  GroupAction group;  // twist fixed; vertex maps ignored
  Strategy strategy = Strategy::ProjectedSubspace;
};

/// Solves at `levels` successive refinements starting from p and
/// Richardson-extrapolates each of the first `count` eigenvalues from the
/// last three levels.
ConvergenceStudy convergence_study(const ProblemSpec& p, int levels, int count,
                                   const EquivariantSetup* equivariant = nullptr, std::uint64_t seed = 0);

/// Extrapolation core on three successive values with ratio-2 mesh sizes.
ConvergenceRow richardson(const std::vector<double>& values);

}  // namespace equispec
