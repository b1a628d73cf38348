#include "equispec/problem.hpp"

#include <cmath>
#include <cstring>

namespace equispec {

namespace {

std::vector<double> sample(const SurfaceMesh& m, const ScalarField& f) {
  std::vector<double> out(m.vertices.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f(m.vertices[i]);
  return out;
}

std::vector<double> prolong(const std::vector<double>& coarse, const Refinement& r) {
  std::vector<double> out(coarse);
  out.reserve(coarse.size() + r.parents.size());
  for (const auto& pr : r.parents) out.push_back(0.5 * (coarse[pr[0]] + coarse[pr[1]]));
  return out;
}

}  // namespace

ProblemSpec make_problem(SurfaceMesh mesh, int level, std::string name) {
  ProblemSpec p;
  p.potential.assign(mesh.vertices.size(), 0.0);
  p.robin.assign(mesh.vertices.size(), 0.0);
  p.mesh = std::move(mesh);
  p.level = level;
  p.name = std::move(name);
  return p;
}

void set_potential(ProblemSpec& p, ScalarField q) {
  p.potential = sample(p.mesh, q);
  p.potential_source = std::move(q);
}

void set_potential_constant(ProblemSpec& p, double q) {
  set_potential(p, [q](const Vec3&) { return q; });
}

void set_robin(ProblemSpec& p, ScalarField r) {
  p.robin = sample(p.mesh, r);
  p.robin_source = std::move(r);
}

void set_robin_constant(ProblemSpec& p, double r) {
  set_robin(p, [r](const Vec3&) { return r; });
}

int tag_boundary(ProblemSpec& p, const std::function<bool(const Vec3&)>& pred, BoundaryTag tag) {
  return tag_boundary_where(p.mesh, pred, tag);
}

ScalarField jacobi_potential(const Chart& chart) {
  switch (chart.kind) {
    case Chart::Kind::Sphere:
      return [](const Vec3&) { return 2.0; };
    case Chart::Kind::Catenoid:
    case Chart::Kind::CatenoidPair: {
      const double a = chart.a, s = chart.s;
      const bool pair = chart.kind == Chart::Kind::CatenoidPair;
      return [a, s, pair](const Vec3& p) {
        const double zeta = pair ? std::abs(p.z()) : p.z();
        const double c = std::cosh(a * zeta - s);
        return (a * a + 1.0 / (a * a)) / (c * c * c * c);
      };
    }
    default:
      return [](const Vec3&) { return 0.0; };
  }
}

int tag_robin_top(ProblemSpec& p) {
  if (!p.mesh.chart || (p.mesh.chart->kind != Chart::Kind::Catenoid &&
                        p.mesh.chart->kind != Chart::Kind::CatenoidPair))
    throw InvalidInput("Robin top boundary is only defined on catenoid domains");
  const double h = p.mesh.chart->h;
  const double tol = 1e-9 * std::max(1.0, h);
  const int n = tag_boundary(
      p, [h, tol](const Vec3& m) { return std::abs(std::abs(m.z()) - h) < tol; }, BoundaryTag::Robin);
  if (!p.robin_source) set_robin_constant(p, 1.0);
  return n;
}

ProblemSpec apply_conformal_change(const ProblemSpec& p, const std::vector<double>& rho) {
  if (static_cast<int>(rho.size()) != p.vertex_count())
    throw InvalidInput("conformal factor needs one sample per vertex");
  for (double v : rho)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("conformal factor must be positive");
  ProblemSpec out = p;
  out.mesh.metric_override.resize(p.mesh.triangles.size());
  for (int t = 0; t < p.mesh.triangle_count(); ++t) {
    const auto& tri = p.mesh.triangles[t];
    const double rho_t = std::cbrt(rho[tri[0]] * rho[tri[1]] * rho[tri[2]]);
    out.mesh.metric_override[t] = rho_t * rho_t * induced_metric(p.mesh, t);
  }
  for (size_t v = 0; v < rho.size(); ++v) {
    out.potential[v] = p.potential[v] / (rho[v] * rho[v]);
    out.robin[v] = p.robin[v] / rho[v];
  }
  std::vector<double> total = rho;
  if (p.conformal_factor)
    for (size_t v = 0; v < rho.size(); ++v) total[v] *= (*p.conformal_factor)[v];
  out.conformal_factor = total;
  // Analytic sources describe the unscaled coefficients.
  out.potential_source = nullptr;
  out.robin_source = nullptr;
  return out;
}

ProblemSpec refine_problem(const ProblemSpec& p, Refinement* detail) {
  Refinement r = refine_with_parents(p.mesh);
  ProblemSpec out;
  out.mesh = r.mesh;
  out.level = p.level + 1;
  out.name = p.name;
  out.potential_source = p.potential_source;
  out.robin_source = p.robin_source;
  out.potential = p.potential_source ? sample(out.mesh, p.potential_source) : prolong(p.potential, r);
  out.robin = p.robin_source ? sample(out.mesh, p.robin_source) : prolong(p.robin, r);
  if (p.conformal_factor) out.conformal_factor = prolong(*p.conformal_factor, r);
  if (detail) *detail = std::move(r);
  return out;
}

void validate(const ProblemSpec& p) {
  validate(p.mesh);
  if (static_cast<int>(p.potential.size()) != p.vertex_count() ||
      static_cast<int>(p.robin.size()) != p.vertex_count())
    throw InvalidInput("potential and Robin samples must match the vertex count");
  for (double v : p.potential)
    if (!std::isfinite(v)) throw InvalidInput("potential is not finite");
  for (double v : p.robin)
    if (!std::isfinite(v)) throw InvalidInput("Robin coefficient is not finite");
  if (p.conformal_factor)
    for (double v : *p.conformal_factor)
      if (!(v > 0.0)) throw InvalidInput("conformal factor must be positive");
}

std::uint64_t problem_hash(const ProblemSpec& p) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : p.mesh.vertices) mix(v.data(), 3 * sizeof(double));
  for (const auto& t : p.mesh.triangles) mix(t.data(), 3 * sizeof(int));
  for (const auto& e : p.mesh.boundary_edges) {
    mix(e.v.data(), 2 * sizeof(int));
    const char c = tag_letter(e.tag);
    mix(&c, 1);
  }
  for (const auto& g : p.mesh.metric_override) mix(g.data(), 4 * sizeof(double));
  mix(p.potential.data(), p.potential.size() * sizeof(double));
  mix(p.robin.data(), p.robin.size() * sizeof(double));
  return h;
}

}  // namespace equispec
