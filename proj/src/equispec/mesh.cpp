#include "equispec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <unordered_map>

namespace equispec {

namespace {

constexpr double kPi = std::numbers::pi;

double param_or(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Vec3 sph(double theta, double z) {
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(theta), rho * std::sin(theta), z};
}

// Flips triangles whose normal points toward the origin (sphere charts).
void orient_outward(SurfaceMesh& m) {
  for (auto& t : m.triangles) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(t[1], t[2]);
  }
}

// Every single-incidence edge becomes a Neumann boundary edge, oriented as in
// its triangle.
void tag_open_edges(SurfaceMesh& m) {
  m.boundary_edges.clear();
  EdgeTopology topo(m);
  for (const auto& t : m.triangles) {
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      const auto* inc = topo.find(a, b);
      if (inc->triangles.size() == 1) m.boundary_edges.push_back({{a, b}, BoundaryTag::Neumann});
    }
  }
}

SurfaceMesh sphere_base(Domain d, const Params& params) {
  SurfaceMesh m;
  m.chart = Chart{Chart::Kind::Sphere};
  const Vec3 X(1, 0, 0), Y(0, 1, 0), Z(0, 0, 1);
  switch (d) {
    case Domain::SphereOctant:
      m.vertices = {X, Y, Z};
      m.triangles = {{0, 1, 2}};
      break;
    case Domain::SphereLune:
      m.vertices = {X, Y, Z, -Z};
      m.triangles = {{0, 1, 2}, {0, 3, 1}};
      break;
    case Domain::LuneCut: {
      const double zeta = param_or(params, "zeta", 0.0);
      if (!(zeta > -1.0 && zeta < 1.0)) throw InvalidInput("lune_cut: zeta must lie in (-1,1)");
      // Arc on {x=0} from north to south pole with a vertex at height zeta.
      std::vector<Vec3> arc = {Z};
      const Vec3 P(0.0, std::sqrt(1.0 - zeta * zeta), zeta);
      if (zeta > 0.0) {
        arc.push_back(P);
        arc.push_back(Y);
      } else if (zeta < 0.0) {
        arc.push_back(Y);
        arc.push_back(P);
      } else {
        arc.push_back(Y);
      }
      arc.push_back(-Z);
      m.vertices.push_back(X);
      for (const auto& p : arc) m.vertices.push_back(p);
      for (int i = 1; i + 1 < static_cast<int>(m.vertices.size()); ++i)
        m.triangles.push_back({0, i, i + 1});
      break;
    }
    case Domain::FullSphere:
    case Domain::SphereHemisphere: {
      const int k = static_cast<int>(param_or(params, "k", 2));
      if (k < 2) throw InvalidInput("sphere: equatorial order k must be >= 2");
      const double theta0 = param_or(params, "theta0", 0.0);
      m.vertices.push_back(Z);
      m.vertices.push_back(-Z);
      for (int j = 0; j < 2 * k; ++j) m.vertices.push_back(sph(theta0 + j * kPi / k, 0.0));
      for (int j = 0; j < 2 * k; ++j) {
        const int e0 = 2 + j, e1 = 2 + (j + 1) % (2 * k);
        m.triangles.push_back({0, e0, e1});
      }
      if (d == Domain::FullSphere) {
        for (int j = 0; j < 2 * k; ++j) {
          const int e0 = 2 + j, e1 = 2 + (j + 1) % (2 * k);
          m.triangles.push_back({1, e1, e0});
        }
      } else {
        // drop the unused south pole
        m.vertices.erase(m.vertices.begin() + 1);
        for (auto& t : m.triangles)
          for (auto& v : t)
            if (v > 1) --v;
      }
      break;
    }
    default:
      throw InvalidInput("not a spherical domain");
  }
  orient_outward(m);
  tag_open_edges(m);
  return m;
}

// Structured (zeta, theta) grid on the catenoid with mirror-symmetric
// diagonals: the split direction alternates with row + column parity, so
// every meridian theta_j is a line of reflection symmetry.
void catenoid_grid(SurfaceMesh& m, double a, double h, double s, int n_theta, int n_zeta,
                   double theta0, bool mirrored) {
  const int base = m.vertex_count();
  for (int i = 0; i <= n_zeta; ++i) {
    const double zeta = h * i / n_zeta;
    const double r = std::cosh(a * zeta - s) / a;
    for (int j = 0; j < n_theta; ++j) {
      const double th = theta0 + 2.0 * kPi * j / n_theta;
      m.vertices.emplace_back(r * std::cos(th), r * std::sin(th), mirrored ? -zeta : zeta);
    }
  }
  auto id = [&](int i, int j) { return base + i * n_theta + (j % n_theta); };
  for (int i = 0; i < n_zeta; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int v00 = id(i, j), v01 = id(i, j + 1), v10 = id(i + 1, j), v11 = id(i + 1, j + 1);
      // Orientation (theta, zeta) gives the normal d_theta x d_zeta, pointing
      // away from the axis; reflecting positions below keeps the index order,
      // which flips that normal.
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({v00, v01, v11});
        m.triangles.push_back({v00, v11, v10});
      } else {
        m.triangles.push_back({v00, v01, v10});
        m.triangles.push_back({v01, v11, v10});
      }
    }
  }
}

SurfaceMesh catenoid_base(Domain d, const Params& params) {
  const double a = param_or(params, "a", kCatenoidA);
  const double h = param_or(params, "h", kCatenoidH);
  const double s = param_or(params, "s", kCatenoidS);
  if (!(a > 0.0 && h > 0.0 && s > 0.0)) throw InvalidInput("catenoid: a, h, s must be positive");
  const int n_theta = static_cast<int>(param_or(params, "n_theta", 16));
  const int n_zeta = static_cast<int>(param_or(params, "n_zeta", 4));
  if (n_theta < 4 || n_theta % 2 != 0) throw InvalidInput("catenoid: n_theta must be even and >= 4");
  if (n_zeta < 1) throw InvalidInput("catenoid: n_zeta must be >= 1");
  const double theta0 = param_or(params, "theta0", 0.0);
  SurfaceMesh m;
  Chart c{d == Domain::CatenoidK0 ? Chart::Kind::Catenoid : Chart::Kind::CatenoidPair, a, h, s};
  m.chart = c;
  catenoid_grid(m, a, h, s, n_theta, n_zeta, theta0, false);
  if (d == Domain::UnionPmK0) catenoid_grid(m, a, h, s, n_theta, n_zeta, theta0, true);
  tag_open_edges(m);
  return m;
}

SurfaceMesh disk_base(const Params& params) {
  const int n = static_cast<int>(param_or(params, "n_sectors", 8));
  if (n < 3) throw InvalidInput("unit_disk: n_sectors must be >= 3");
  const double theta0 = param_or(params, "theta0", 0.0);
  SurfaceMesh m;
  m.chart = Chart{Chart::Kind::Disk};
  m.vertices.emplace_back(0.0, 0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    const double th = theta0 + 2.0 * kPi * j / n;
    m.vertices.emplace_back(std::cos(th), std::sin(th), 0.0);
  }
  for (int j = 0; j < n; ++j) m.triangles.push_back({0, 1 + j, 1 + (j + 1) % n});
  tag_open_edges(m);
  return m;
}

}  // namespace

char tag_letter(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet: return 'D';
    case BoundaryTag::Neumann: return 'N';
    case BoundaryTag::Robin: return 'R';
  }
  return '?';
}

BoundaryTag tag_from_letter(char c) {
  switch (c) {
    case 'D': return BoundaryTag::Dirichlet;
    case 'N': return BoundaryTag::Neumann;
    case 'R': return BoundaryTag::Robin;
    default: throw InvalidInput(std::string("unknown boundary tag '") + c + "'");
  }
}

std::string Chart::name() const {
  switch (kind) {
    case Kind::Plane: return "plane";
    case Kind::Sphere: return "sphere";
    case Kind::Catenoid: return "catenoid";
    case Kind::CatenoidPair: return "catenoid_pair";
    case Kind::Disk: return "disk";
  }
  return "plane";
}

Chart Chart::from_name(const std::string& name) {
  if (name == "plane") return Chart{Kind::Plane};
  if (name == "sphere") return Chart{Kind::Sphere};
  if (name == "disk") return Chart{Kind::Disk};
  if (name == "catenoid") return Chart{Kind::Catenoid, kCatenoidA, kCatenoidH, kCatenoidS};
  if (name == "catenoid_pair") return Chart{Kind::CatenoidPair, kCatenoidA, kCatenoidH, kCatenoidS};
  throw InvalidInput("unknown chart '" + name + "'");
}

EdgeTopology::EdgeTopology(const SurfaceMesh& mesh) {
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i], b = tri[(i + 1) % 3];
      auto& inc = edges[edge_key(a, b)];
      inc.v = {std::min(a, b), std::max(a, b)};
      inc.triangles.push_back(t);
    }
  }
}

const EdgeTopology::Incidence* EdgeTopology::find(int a, int b) const {
  auto it = edges.find(edge_key(a, b));
  return it == edges.end() ? nullptr : &it->second;
}

void validate(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  for (const auto& t : mesh.triangles) {
    for (int v : t)
      if (v < 0 || v >= nv) throw InvalidInput("triangle references missing vertex");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw InvalidInput("triangle repeats a vertex");
  }
  EdgeTopology topo(mesh);
  std::set<std::uint64_t> boundary;
  for (const auto& e : mesh.boundary_edges) {
    const auto* inc = topo.find(e.v[0], e.v[1]);
    if (!inc) throw InvalidInput("boundary edge is not a mesh edge");
    if (inc->triangles.size() != 1) throw InvalidInput("boundary edge must belong to exactly one triangle");
    if (!boundary.insert(edge_key(e.v[0], e.v[1])).second) throw InvalidInput("boundary edge tagged twice");
  }
  for (const auto& [key, inc] : topo.edges) {
    if (inc.triangles.size() > 2) throw InvalidInput("non-manifold edge");
    if (inc.triangles.size() == 1 && !boundary.count(key)) throw InvalidInput("untagged boundary edge");
    if (inc.triangles.size() == 2) {
      // The two triangles must traverse the edge in opposite directions.
      auto direction = [&](int t) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i)
          if (tri[i] == inc.v[0] && tri[(i + 1) % 3] == inc.v[1]) return 1;
        return -1;
      };
      if (direction(inc.triangles[0]) == direction(inc.triangles[1]))
        throw InvalidInput("inconsistent triangle orientation");
    }
  }
  if (!mesh.metric_override.empty() &&
      static_cast<int>(mesh.metric_override.size()) != mesh.triangle_count())
    throw InvalidInput("metric_override must have one entry per triangle");
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Metric2 g = induced_metric(mesh, t);
    if (!(g(0, 0) > 0.0 && g.determinant() > 0.0)) throw InvalidInput("metric not positive definite");
  }
}

Domain domain_from_name(const std::string& name) {
  static const std::map<std::string, Domain> names = {
      {"sphere_octant", Domain::SphereOctant}, {"sphere_lune", Domain::SphereLune},
      {"sphere_hemisphere", Domain::SphereHemisphere}, {"full_sphere", Domain::FullSphere},
      {"catenoid_K0", Domain::CatenoidK0}, {"union_pm_K0", Domain::UnionPmK0},
      {"unit_disk", Domain::UnitDisk}, {"lune_cut", Domain::LuneCut}};
  auto it = names.find(name);
  if (it == names.end()) throw InvalidInput("unknown domain '" + name + "'");
  return it->second;
}

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::SphereOctant: return "sphere_octant";
    case Domain::SphereLune: return "sphere_lune";
    case Domain::SphereHemisphere: return "sphere_hemisphere";
    case Domain::FullSphere: return "full_sphere";
    case Domain::CatenoidK0: return "catenoid_K0";
    case Domain::UnionPmK0: return "union_pm_K0";
    case Domain::UnitDisk: return "unit_disk";
    case Domain::LuneCut: return "lune_cut";
  }
  return "?";
}

SurfaceMesh build_builtin(Domain domain, int level, const Params& params) {
  if (level < 0) throw InvalidInput("refinement level must be >= 0");
  SurfaceMesh m;
  switch (domain) {
    case Domain::CatenoidK0:
    case Domain::UnionPmK0:
      m = catenoid_base(domain, params);
      break;
    case Domain::UnitDisk:
      m = disk_base(params);
      break;
    default:
      m = sphere_base(domain, params);
  }
  for (int l = 0; l < level; ++l) m = refine(m);
  return m;
}

Vec3 project_to_chart(const Chart& chart, const Vec3& p, bool on_boundary) {
  switch (chart.kind) {
    case Chart::Kind::Plane:
      return p;
    case Chart::Kind::Sphere:
      return p.normalized();
    case Chart::Kind::Disk: {
      if (!on_boundary) return p;
      const double r = std::hypot(p.x(), p.y());
      return {p.x() / r, p.y() / r, p.z()};
    }
    case Chart::Kind::Catenoid:
    case Chart::Kind::CatenoidPair: {
      const double zeta = chart.kind == Chart::Kind::CatenoidPair ? std::abs(p.z()) : p.z();
      const double r = std::cosh(chart.a * zeta - chart.s) / chart.a;
      const double th = std::atan2(p.y(), p.x());
      return {r * std::cos(th), r * std::sin(th), p.z()};
    }
  }
  return p;
}

Refinement refine_with_parents(const SurfaceMesh& mesh) {
  Refinement out;
  SurfaceMesh& m = out.mesh;
  m.vertices = mesh.vertices;
  m.chart = mesh.chart;
  std::set<std::uint64_t> boundary;
  for (const auto& e : mesh.boundary_edges) boundary.insert(edge_key(e.v[0], e.v[1]));

  std::unordered_map<std::uint64_t, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 p = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    if (mesh.chart) p = project_to_chart(*mesh.chart, p, boundary.count(key) > 0);
    const int id = m.vertex_count();
    m.vertices.push_back(p);
    out.parents.push_back({std::min(a, b), std::max(a, b)});
    midpoint.emplace(key, id);
    return id;
  };

  // Child corners in the parent's (s,t) frame, used to carry metric overrides.
  static const std::array<std::array<Eigen::Vector2d, 3>, 4> corners = {{
      {Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 0), Eigen::Vector2d(0, 0.5)},
      {Eigen::Vector2d(1, 0), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.5, 0)},
      {Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 0.5), Eigen::Vector2d(0.5, 0.5)},
      {Eigen::Vector2d(0.5, 0), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0, 0.5)},
  }};

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int m01 = mid(tri[0], tri[1]), m12 = mid(tri[1], tri[2]), m20 = mid(tri[2], tri[0]);
    m.triangles.push_back({tri[0], m01, m20});
    m.triangles.push_back({tri[1], m12, m01});
    m.triangles.push_back({tri[2], m20, m12});
    m.triangles.push_back({m01, m12, m20});
    if (!mesh.metric_override.empty()) {
      const Metric2& g = mesh.metric_override[t];
      for (const auto& c : corners) {
        Eigen::Matrix2d J;
        J.col(0) = c[1] - c[0];
        J.col(1) = c[2] - c[0];
        m.metric_override.push_back(J.transpose() * g * J);
      }
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    const int c = midpoint.at(edge_key(e.v[0], e.v[1]));
    m.boundary_edges.push_back({{e.v[0], c}, e.tag});
    m.boundary_edges.push_back({{c, e.v[1]}, e.tag});
  }
  return out;
}

SurfaceMesh refine(const SurfaceMesh& mesh) { return refine_with_parents(mesh).mesh; }

Metric2 induced_metric(const SurfaceMesh& mesh, int triangle) {
  if (triangle < 0 || triangle >= mesh.triangle_count()) throw InvalidInput("triangle index out of range");
  Metric2 g;
  if (!mesh.metric_override.empty()) {
    g = mesh.metric_override[triangle];
  } else {
    const auto& t = mesh.triangles[triangle];
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  }
  if (!(g.determinant() > 1e-300)) throw InvalidInput("degenerate triangle " + std::to_string(triangle));
  return g;
}

double triangle_area(const SurfaceMesh& mesh, int triangle) {
  return 0.5 * std::sqrt(induced_metric(mesh, triangle).determinant());
}

double total_area(const SurfaceMesh& mesh) {
  double a = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) a += triangle_area(mesh, t);
  return a;
}

double max_edge_length(const SurfaceMesh& mesh) {
  double h = 0.0;
  for (const auto& t : mesh.triangles)
    for (int i = 0; i < 3; ++i)
      h = std::max(h, (mesh.vertices[t[i]] - mesh.vertices[t[(i + 1) % 3]]).norm());
  return h;
}

Vec3 triangle_normal(const SurfaceMesh& mesh, int triangle) {
  const auto& t = mesh.triangles[triangle];
  const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
  return n.normalized();
}

std::vector<Vec3> vertex_normals(const SurfaceMesh& mesh) {
  std::vector<Vec3> n(mesh.vertices.size(), Vec3::Zero());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 nt = triangle_normal(mesh, t);
    for (int i = 0; i < 3; ++i) {
      const Vec3 u = (mesh.vertices[tri[(i + 1) % 3]] - mesh.vertices[tri[i]]).normalized();
      const Vec3 w = (mesh.vertices[tri[(i + 2) % 3]] - mesh.vertices[tri[i]]).normalized();
      n[tri[i]] += std::acos(std::clamp(u.dot(w), -1.0, 1.0)) * nt;
    }
  }
  for (auto& v : n) v.normalize();
  return n;
}

int euler_characteristic(const SurfaceMesh& mesh) {
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[v] = 1;
  const int V = static_cast<int>(std::count(used.begin(), used.end(), 1));
  const int E = static_cast<int>(EdgeTopology(mesh).edges.size());
  return V - E + mesh.triangle_count();
}

std::vector<int> triangle_components(const SurfaceMesh& mesh, int* count) {
  EdgeTopology topo(mesh);
  std::vector<std::vector<int>> adj(mesh.triangles.size());
  for (const auto& [key, inc] : topo.edges)
    if (inc.triangles.size() == 2) {
      adj[inc.triangles[0]].push_back(inc.triangles[1]);
      adj[inc.triangles[1]].push_back(inc.triangles[0]);
    }
  std::vector<int> label(mesh.triangles.size(), -1);
  int c = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (label[t] >= 0) continue;
    std::queue<int> q;
    q.push(t);
    label[t] = c;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (label[w] < 0) {
          label[w] = c;
          q.push(w);
        }
    }
    ++c;
  }
  if (count) *count = c;
  return label;
}

Submesh extract_submesh(const SurfaceMesh& mesh, const std::vector<int>& triangles,
                        BoundaryTag interface_tag) {
  Submesh out;
  out.parent_to_vertex.assign(mesh.vertices.size(), -1);
  std::vector<char> in_piece(mesh.triangles.size(), 0);
  for (int t : triangles) {
    if (t < 0 || t >= mesh.triangle_count()) throw InvalidInput("piece references missing triangle");
    if (in_piece[t]) throw InvalidInput("piece lists a triangle twice");
    in_piece[t] = 1;
  }
  SurfaceMesh& m = out.mesh;
  m.chart = mesh.chart;
  auto local = [&](int v) {
    if (out.parent_to_vertex[v] < 0) {
      out.parent_to_vertex[v] = m.vertex_count();
      out.vertex_to_parent.push_back(v);
      m.vertices.push_back(mesh.vertices[v]);
    }
    return out.parent_to_vertex[v];
  };
  for (int t : triangles) {
    const auto& tri = mesh.triangles[t];
    m.triangles.push_back({local(tri[0]), local(tri[1]), local(tri[2])});
    if (!mesh.metric_override.empty()) m.metric_override.push_back(mesh.metric_override[t]);
  }
  std::map<std::uint64_t, BoundaryTag> parent_tags;
  for (const auto& e : mesh.boundary_edges) parent_tags[edge_key(e.v[0], e.v[1])] = e.tag;
  EdgeTopology topo(mesh);
  for (int t : triangles) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[i], b = tri[(i + 1) % 3];
      const auto key = edge_key(a, b);
      const auto* inc = topo.find(a, b);
      int inside = 0;
      for (int u : inc->triangles) inside += in_piece[u];
      if (inside == 2) continue;
      const int la = out.parent_to_vertex[a], lb = out.parent_to_vertex[b];
      auto it = parent_tags.find(key);
      if (it != parent_tags.end()) {
        m.boundary_edges.push_back({{la, lb}, it->second});
      } else {
        m.boundary_edges.push_back({{la, lb}, interface_tag});
        out.interface_edges.push_back({la, lb});
      }
    }
  }
  return out;
}

Excision excise_disks(const SurfaceMesh& mesh, const std::vector<Vec3>& centers, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("excision radius must be positive");
  Excision out;
  const int nv = mesh.vertex_count();
  // Which ball (if any) swallows each vertex.
  std::vector<int> owner(nv, -1);
  for (int v = 0; v < nv; ++v)
    for (int c = 0; c < static_cast<int>(centers.size()); ++c)
      if ((mesh.vertices[v] - centers[c]).norm() < radius) {
        if (owner[v] >= 0 && owner[v] != c) throw InvalidInput("excised disks overlap");
        owner[v] = c;
      }
  std::vector<int> tri_owner(mesh.triangles.size(), -1);
  for (int t = 0; t < mesh.triangle_count(); ++t)
    for (int v : mesh.triangles[t])
      if (owner[v] >= 0) {
        if (tri_owner[t] >= 0 && tri_owner[t] != owner[v]) throw InvalidInput("excised disks overlap");
        tri_owner[t] = owner[v];
      }
  // Regions of different centers may not share a vertex either.
  std::vector<int> vertex_region(nv, -1);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (tri_owner[t] < 0) continue;
    for (int v : mesh.triangles[t]) {
      if (vertex_region[v] >= 0 && vertex_region[v] != tri_owner[t]) throw InvalidInput("excised disks overlap");
      vertex_region[v] = tri_owner[t];
    }
  }
  for (const auto& e : mesh.boundary_edges)
    if (vertex_region[e.v[0]] >= 0 || vertex_region[e.v[1]] >= 0)
      throw InvalidInput("excised disk touches the domain boundary");

  std::vector<int> kept;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (tri_owner[t] < 0) kept.push_back(t);
    else ++out.removed_triangles;
  }
  if (out.removed_triangles == 0) {
    out.mesh = mesh;
    out.vertex_map.resize(nv);
    for (int v = 0; v < nv; ++v) out.vertex_map[v] = v;
    out.warnings.push_back("excision radius below mesh resolution: no triangle removed");
    return out;
  }
  Submesh sub = extract_submesh(mesh, kept, BoundaryTag::Dirichlet);
  out.mesh = std::move(sub.mesh);
  out.vertex_map = std::move(sub.parent_to_vertex);
  for (int v = 0; v < nv; ++v) {
    if (out.vertex_map[v] >= 0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) best = std::min(best, (mesh.vertices[v] - c).norm());
    out.max_removed_distance = std::max(out.max_removed_distance, best);
  }
  return out;
}

}  // namespace equispec
