#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "equispec/mesh.hpp"

namespace equispec {

using ScalarField = std::function<double(const Vec3&)>;

/// An instance of the form
///   T(u,v) = int (g(du,dv) - q u v) - int_{Robin} r u v
/// on a tagged mesh. q and r are per-vertex samples; the optional analytic
/// sources let refinement resample them instead of interpolating.
struct ProblemSpec {
  SurfaceMesh mesh;
  std::vector<double> potential;  // q
  std::vector<double> robin;      // r, only read on Robin edges
  std::optional<std::vector<double>> conformal_factor;
  ScalarField potential_source;
  ScalarField robin_source;
  int level = 0;
  std::string name;

  int vertex_count() const { return mesh.vertex_count(); }
};

ProblemSpec make_problem(SurfaceMesh mesh, int level = 0, std::string name = {});

void set_potential(ProblemSpec& p, ScalarField q);
void set_potential_constant(ProblemSpec& p, double q);
void set_robin(ProblemSpec& p, ScalarField r);
void set_robin_constant(ProblemSpec& p, double r);

/// Retags boundary edges whose midpoint satisfies pred. Returns the count.
int tag_boundary(ProblemSpec& p, const std::function<bool(const Vec3&)>& pred, BoundaryTag tag);

/// Jacobi potential |A|^2 of the chart surface (2 on the sphere, the
/// catenoid profile value on K0, 0 on flat charts).
ScalarField jacobi_potential(const Chart& chart);

/// Tags the part of a catenoid boundary lying on the unit sphere (|z| = h)
/// Robin with r = 1, the free boundary condition.
int tag_robin_top(ProblemSpec& p);

/// g -> rho^2 g through metric_override, q -> q / rho^2, r -> r / rho.
/// Triangle factors use the geometric mean of the three vertex samples, so
/// applying 1/rho afterwards restores the input exactly.
ProblemSpec apply_conformal_change(const ProblemSpec& p, const std::vector<double>& rho);

/// One level of midpoint refinement with coefficients carried along.
ProblemSpec refine_problem(const ProblemSpec& p, Refinement* detail = nullptr);

void validate(const ProblemSpec& p);

/// FNV-1a over the problem's numeric content, used for seeds and reports.
std::uint64_t problem_hash(const ProblemSpec& p);

}  // namespace equispec
