#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "equispec/error.hpp"

namespace equispec {

using Vec3 = Eigen::Vector3d;
using Metric2 = Eigen::Matrix2d;

enum class BoundaryTag : std::uint8_t { Dirichlet, Neumann, Robin };

char tag_letter(BoundaryTag tag);
BoundaryTag tag_from_letter(char c);

struct BoundaryEdge {
  std::array<int, 2> v;
  BoundaryTag tag = BoundaryTag::Neumann;
};

/// Analytic surface a mesh was sampled from. Refinement places new vertices
/// back on it.
struct Chart {
  enum class Kind { Plane, Sphere, Catenoid, CatenoidPair, Disk };
  Kind kind = Kind::Plane;
  // Catenoid profile r(z) = cosh(a z - s) / a on 0 <= z <= h.
  double a = 0.0;
  double h = 0.0;
  double s = 0.0;

  std::string name() const;
  static Chart from_name(const std::string& name);
};

/// Triangulated surface in R^3 with tagged boundary.
///
/// Triangles are consistently oriented; every edge with a single incident
/// triangle appears exactly once in boundary_edges. metric_override, when
/// non-empty, holds one first fundamental form per triangle expressed in the
/// triangle's edge frame (v1 - v0, v2 - v0).
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::optional<Chart> chart;
  std::vector<Metric2> metric_override;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

/// Edge -> incident triangles, built once per mesh.
struct EdgeTopology {
  struct Incidence {
    std::array<int, 2> v;
    std::vector<int> triangles;
  };
  std::map<std::uint64_t, Incidence> edges;

  explicit EdgeTopology(const SurfaceMesh& mesh);
  const Incidence* find(int a, int b) const;
};

/// Checks manifoldness, orientation, boundary tag partition and metric
/// positivity. Throws InvalidInput on the first violation.
void validate(const SurfaceMesh& mesh);

enum class Domain {
  SphereOctant,
  SphereLune,
  SphereHemisphere,
  FullSphere,
  CatenoidK0,
  UnionPmK0,
  UnitDisk,
  LuneCut,
};

Domain domain_from_name(const std::string& name);
std::string domain_name(Domain d);

using Params = std::map<std::string, double>;

// Catenoid annulus defaults.
inline constexpr double kCatenoidA = 2.3328;
inline constexpr double kCatenoidH = 0.87028;
inline constexpr double kCatenoidS = 1.4907;

/// Builds one of the model domains at the given refinement level.
///
/// Recognized params:
///   full_sphere / sphere_hemisphere: k (equatorial order, >= 2), theta0
///   catenoid_K0 / union_pm_K0: a, h, s, n_theta (even), n_zeta, theta0
///   unit_disk: n_sectors (>= 3), theta0
///   lune_cut: zeta in (-1, 1)
/// All boundary edges come back tagged Neumann.
SurfaceMesh build_builtin(Domain domain, int level, const Params& params = {});

/// Midpoint subdivision (each triangle into four). Old vertices keep their
/// indices; new vertex n + i is the midpoint of parents[i].
struct Refinement {
  SurfaceMesh mesh;
  std::vector<std::array<int, 2>> parents;
};
Refinement refine_with_parents(const SurfaceMesh& mesh);
SurfaceMesh refine(const SurfaceMesh& mesh);

/// Places p on the chart surface. On disk charts only points flagged as
/// boundary move (radially onto the unit circle).
Vec3 project_to_chart(const Chart& chart, const Vec3& p, bool on_boundary);

/// First fundamental form of a triangle in its edge frame.
Metric2 induced_metric(const SurfaceMesh& mesh, int triangle);
double triangle_area(const SurfaceMesh& mesh, int triangle);
double total_area(const SurfaceMesh& mesh);
double max_edge_length(const SurfaceMesh& mesh);
Vec3 triangle_normal(const SurfaceMesh& mesh, int triangle);  // unit
std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh);    // angle weighted

int euler_characteristic(const SurfaceMesh& mesh);
/// Connected components over edge-adjacent triangles; returns label per
/// triangle and writes the component count.
std::vector<int> triangle_components(const SurfaceMesh& mesh, int* count);

struct Excision {
  SurfaceMesh mesh;
  std::vector<int> vertex_map;  // old vertex -> new index or -1
  int removed_triangles = 0;
  double max_removed_distance = 0.0;  // f2(delta) realized by this cut
  std::vector<std::string> warnings;
};

/// Removes every triangle with a vertex strictly inside one of the balls and
/// tags the new interface Dirichlet.
Excision excise_disks(const SurfaceMesh& mesh, const std::vector<Vec3>& centers,
                      double radius);

/// Submesh on a triangle subset. Edges of the subset that were interior in
/// the parent get interface_tag; parent boundary edges keep their tag.
struct Submesh {
  SurfaceMesh mesh;
  std::vector<int> vertex_to_parent;
  std::vector<int> parent_to_vertex;  // -1 when absent
  std::vector<std::array<int, 2>> interface_edges;  // in submesh indices
};
Submesh extract_submesh(const SurfaceMesh& mesh, const std::vector<int>& triangles,
                        BoundaryTag interface_tag);

/// Retags boundary edges whose chord midpoint satisfies the predicate.
template <class Pred>
int tag_boundary_where(SurfaceMesh& mesh, Pred pred, BoundaryTag tag) {
  int n = 0;
  for (auto& e : mesh.boundary_edges) {
    const Vec3 mid = 0.5 * (mesh.vertices[e.v[0]] + mesh.vertices[e.v[1]]);
    if (pred(mid)) {
      e.tag = tag;
      ++n;
    }
  }
  return n;
}

}  // namespace equispec
