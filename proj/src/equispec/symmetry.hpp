#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equispec/problem.hpp"

namespace equispec {

/// Finite subgroup of O(3) with a sign character.
///
/// Elements are listed identity first, then in breadth-first order over the
/// generators (each new element is generator * known element). vertex_maps
/// and triangle_maps are filled by act_on_mesh: element g sends vertex v to
/// vertex_maps[g][v].
struct GroupAction {
  std::vector<Eigen::Matrix3d> elements;
  std::vector<int> twist;  // +1 / -1 per element
  std::vector<std::vector<int>> vertex_maps;
  std::vector<std::vector<int>> triangle_maps;
  std::string name;

  int order() const { return static_cast<int>(elements.size()); }
  bool acts() const { return !vertex_maps.empty(); }
  bool twist_trivial() const;
};

enum class GroupKind { Pyramidal, Prismatic, Antiprismatic, ReflectionPlane, ReflectionLine };

GroupKind group_kind_from_name(const std::string& name);

/// Reflection through the vertical plane {theta = phi}.
Eigen::Matrix3d vertical_reflection(double phi);

GroupAction generate_group(const std::vector<Eigen::Matrix3d>& generators, std::string name);

/// Y_k (order 2k), P_k and A_k (order 4k), <refl_{z=0}>, <rot^pi about the
/// x-axis>. Twist starts trivial.
GroupAction standard_group(GroupKind kind, int k);

/// Parses "pyramidal:5", "prismatic:3", "antiprismatic:2",
/// "reflection_plane", "reflection_line" or "trivial".
GroupAction parse_group(const std::string& text);

/// Index of the element equal to m within 1e-10, or -1.
int find_element(const GroupAction& g, const Eigen::Matrix3d& m);
std::vector<std::vector<int>> multiplication_table(const GroupAction& g);

enum class TwistKind { Trivial, Determinant, NormalSign, Explicit };

TwistKind twist_kind_from_name(const std::string& name);

/// normal_sign needs the group to act on `mesh` (it is acted on here when
/// vertex maps are missing). explicit_table is checked to be a homomorphism.
GroupAction with_twist(const GroupAction& g, TwistKind kind, const SurfaceMesh* mesh = nullptr,
                       const std::vector<int>& explicit_table = {});

/// Realizes each element as a vertex permutation by nearest-vertex matching.
/// Throws when an image has no match within tol, the map is not bijective,
/// triangles do not go to triangles, or boundary tags are not preserved.
GroupAction act_on_mesh(const GroupAction& g, const SurfaceMesh& mesh, double tol = 1e-9);

/// Throws unless q and r are invariant under the action (within tol).
void check_invariant(const GroupAction& g, const ProblemSpec& p, double tol = 1e-9);

/// (1/|G|) sum_g sigma(g) u o g^{-1}.
std::vector<double> twisted_project(const GroupAction& g, const std::vector<double>& values);

struct FundamentalDomain {
  Submesh submesh;                 // Omega_1 with interfaces retagged
  std::vector<int> triangles;      // parent triangle ids of Omega_1
  std::vector<std::array<int, 2>> interface_plus;   // parent vertex pairs, Neumann
  std::vector<std::array<int, 2>> interface_minus;  // parent vertex pairs, Dirichlet
  GroupAction stabilizer;          // subgroup preserving Omega_1
};

/// Picks a connected set of orbit representatives grown without crossing
/// mirror edges and classifies its interior boundary by the pointwise edge
/// stabilizer.
FundamentalDomain fundamental_domain(const ProblemSpec& p, const GroupAction& g);

/// The reduced problem on Omega_1: Neumann on the sigma_p = +1 interface,
/// Dirichlet on sigma_p = -1, parent tags elsewhere.
ProblemSpec fundamental_domain_reduce(const ProblemSpec& p, const GroupAction& g,
                                      FundamentalDomain* detail = nullptr);

}  // namespace equispec
