#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equispec/spectral.hpp"

namespace equispec {

/// Disjoint triangle subsets covering a parent mesh.
struct Partition {
  std::vector<std::vector<int>> pieces;
};

/// Throws unless pieces are non-empty, disjoint and cover every triangle.
void validate_partition(const SurfaceMesh& mesh, const Partition& partition);

/// Restriction of p to a piece; interface edges become Dirichlet (mode D)
/// or Neumann (mode N), exterior edges keep the parent tag.
ProblemSpec internalize(const ProblemSpec& p, const std::vector<int>& piece, BoundaryTag mode,
                        Submesh* detail = nullptr);

/// dim E_{<t} and dim E_{<=t}. Eigenvalues within zero_tol of t count as
/// equal to t.
struct Counts {
  int below = 0;
  int at_or_below = 0;
};

Counts count_eigenvalues(const std::vector<double>& eigenvalues, double t, double zero_tol);

struct InequalityCheck {
  int distinguished = 0;  // 0-based piece index
  int lower_lhs = 0;      // E_{<t}(T)
  int lower_rhs = 0;      // E_{<t}(D_1) + sum E_{<=t}(D_i)
  int upper_lhs = 0;      // E_{<=t}(T)
  int upper_rhs = 0;      // E_{<=t}(N_1) + sum E_{<t}(N_i)
  bool lower_holds = false;
  bool upper_holds = false;
};

/// Both counting inequalities for every choice of distinguished piece.
/// Pure integer arithmetic so callers can feed it arbitrary counts.
std::vector<InequalityCheck> check_counting_inequalities(const Counts& parent, const std::vector<Counts>& dirichlet,
                                                         const std::vector<Counts>& neumann);

struct PieceRecord {
  Counts dirichlet;
  Counts neumann;
  std::vector<double> dirichlet_eigenvalues;
  std::vector<double> neumann_eigenvalues;
  int triangles = 0;
};

struct MontielRosReport {
  double t = 0.0;
  double zero_tol = 0.0;
  Counts parent;
  std::vector<double> parent_eigenvalues;
  std::vector<PieceRecord> pieces;
  std::vector<InequalityCheck> checks;
  bool separated = true;  // no involved eigenvalue within zero_tol of t
  bool all_hold = false;
  std::string group;
};

struct MontielRosOptions {
  double zero_tol = 0.05;
  bool require_separation = false;  // throw instead of classifying near t
  SolveOptions solve;
  Strategy strategy = Strategy::ProjectedSubspace;
};

/// Counts for the parent and each piece's D/N internalizations (each
/// equivariant when `group` is given; the group is realized on every piece)
/// and evaluates both inequalities for every distinguished piece.
MontielRosReport montiel_ros_check(const ProblemSpec& p, const Partition& partition, double t,
                                   const GroupAction* group, const MontielRosOptions& opts = {});

/// Extends a piece eigenfunction by zero and evaluates the parent Rayleigh
/// quotient.
double extension_by_zero_rayleigh(const ProblemSpec& parent, const Submesh& piece, const Eigen::VectorXd& values);

struct PieceBounds {
  int ind_d = 0, nul_d = 0, ind_n = 0, nul_n = 0;
};

struct BoundLedger {
  int pieces = 0;
  int lower = 0;          // lower bound on the index
  int upper = 0;          // upper bound on index + nullity
  int slack = 0;          // compatibility slack, must be >= 0
  bool consistent = true; // lower <= upper
};

BoundLedger isometric_pieces_bounds(const PieceBounds& rec, int n);

enum class LowerBoundVariant { Pyramidal, PlaneOdd, PrismEven };
LowerBoundVariant lower_bound_variant_from_name(const std::string& name);
int symmetry_lower_bound(int k, LowerBoundVariant variant);

/// Affine integer expression c0 + c1 * var, used for bounds stated at
/// symbolic m or n.
struct Affine {
  long long constant = 0;
  long long coefficient = 0;
  std::string variable;
  long long at(long long value) const { return constant + coefficient * value; }
  std::string str() const;
};

/// One block of an equivariant gluing decomposition. Non-distinguished
/// blocks contribute their index; the distinguished one index + nullity.
struct BlockRow {
  std::string block;
  int multiplicity = 1;
  int ind = 0;
  int nul = 0;
  bool distinguished = false;
};

struct GluedLedger {
  std::string recipe;
  std::vector<BlockRow> rows;
  std::vector<int> terms;   // displayed summands
  int equivariant_bound = 0;
  Affine piece_count;       // 2(m+1) or 4n
  Affine absolute_bound;    // pieces * per-piece bound
};

/// Recipes: "antiprismatic" (A_{m+1} on the three-boundary family),
/// "pyramidal" (Y_{m+1}, same family), "prismatic" (P_n, genus-zero family).
GluedLedger glued_surface_ledger(const std::string& recipe, const std::vector<BlockRow>& rows);

/// Block values of the standard gluing decompositions for each recipe.
std::vector<BlockRow> standard_block_rows(const std::string& recipe);

}  // namespace equispec
