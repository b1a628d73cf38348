#include "equispec/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <queue>
#include <set>

namespace equispec {

namespace {

constexpr double kPi = std::numbers::pi;

bool same(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) { return (a - b).cwiseAbs().maxCoeff() < 1e-10; }

std::array<int, 3> sorted(std::array<int, 3> t) {
  std::sort(t.begin(), t.end());
  return t;
}

// Nearest-vertex lookup on x-sorted order.
class VertexLocator {
 public:
  VertexLocator(const std::vector<Vec3>& pts, double tol) : pts_(pts), tol_(tol) {
    order_.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) order_[i] = static_cast<int>(i);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) { return pts[a].x() < pts[b].x(); });
    xs_.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) xs_[i] = pts[order_[i]].x();
  }

  std::vector<int> within(const Vec3& q) const {
    std::vector<int> out;
    auto lo = std::lower_bound(xs_.begin(), xs_.end(), q.x() - tol_);
    for (auto it = lo; it != xs_.end() && *it <= q.x() + tol_; ++it) {
      const int v = order_[it - xs_.begin()];
      if ((pts_[v] - q).norm() <= tol_) out.push_back(v);
    }
    return out;
  }

 private:
  const std::vector<Vec3>& pts_;
  double tol_;
  std::vector<int> order_;
  std::vector<double> xs_;
};

std::vector<int> match_vertices(const Eigen::Matrix3d& R, const SurfaceMesh& mesh, const VertexLocator& loc,
                                const std::map<std::array<int, 3>, int>& tri_index,
                                const std::vector<std::vector<int>>& vertex_triangles) {
  const int n = mesh.vertex_count();
  std::vector<int> map(n, -1);
  std::vector<std::vector<int>> candidates(n);
  for (int v = 0; v < n; ++v) {
    candidates[v] = loc.within(R * mesh.vertices[v]);
    if (candidates[v].empty())
      throw InvalidInput("group element maps vertex " + std::to_string(v) + " off the mesh");
    if (candidates[v].size() == 1) map[v] = candidates[v][0];
  }
  // Coincident vertices (e.g. two sheets touching along a curve) are
  // resolved by requiring that incident triangles map to triangles.
  for (bool progress = true; progress;) {
    progress = false;
    for (int v = 0; v < n; ++v) {
      if (map[v] >= 0) continue;
      std::vector<int> viable;
      for (int c : candidates[v]) {
        bool ok = true;
        for (int t : vertex_triangles[v]) {
          const auto& tri = mesh.triangles[t];
          std::array<int, 3> img{};
          bool known = true;
          for (int i = 0; i < 3; ++i) {
            img[i] = tri[i] == v ? c : map[tri[i]];
            if (img[i] < 0) known = false;
          }
          if (known && !tri_index.count(sorted(img))) ok = false;
        }
        if (ok) viable.push_back(c);
      }
      if (viable.size() == 1) {
        map[v] = viable[0];
        progress = true;
      } else if (viable.empty()) {
        throw InvalidInput("group element does not map triangles to triangles");
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (map[v] < 0) throw InvalidInput("ambiguous vertex match for vertex " + std::to_string(v));
  return map;
}

}  // namespace

bool GroupAction::twist_trivial() const {
  return std::all_of(twist.begin(), twist.end(), [](int s) { return s == 1; });
}

GroupKind group_kind_from_name(const std::string& name) {
  if (name == "pyramidal") return GroupKind::Pyramidal;
  if (name == "prismatic") return GroupKind::Prismatic;
  if (name == "antiprismatic") return GroupKind::Antiprismatic;
  if (name == "reflection_plane") return GroupKind::ReflectionPlane;
  if (name == "reflection_line") return GroupKind::ReflectionLine;
  throw InvalidInput("unknown group kind '" + name + "'");
}

Eigen::Matrix3d vertical_reflection(double phi) {
  const Eigen::Vector3d n(-std::sin(phi), std::cos(phi), 0.0);
  return Eigen::Matrix3d::Identity() - 2.0 * n * n.transpose();
}

GroupAction generate_group(const std::vector<Eigen::Matrix3d>& generators, std::string name) {
  GroupAction g;
  g.name = std::move(name);
  for (const auto& m : generators)
    if ((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidInput("group generator is not orthogonal");
  g.elements.push_back(Eigen::Matrix3d::Identity());
  for (size_t i = 0; i < g.elements.size(); ++i) {
    for (const auto& gen : generators) {
      const Eigen::Matrix3d m = gen * g.elements[i];
      if (find_element(g, m) < 0) g.elements.push_back(m);
      if (g.elements.size() > 4096) throw InvalidInput("generated group is not finite");
    }
  }
  g.twist.assign(g.elements.size(), 1);
  return g;
}

GroupAction standard_group(GroupKind kind, int k) {
  if (k < 1) throw InvalidInput("group parameter k must be >= 1");
  const Eigen::Matrix3d refl_z = Eigen::Vector3d(1, 1, -1).asDiagonal();
  const Eigen::Matrix3d rot_x = Eigen::Vector3d(1, -1, -1).asDiagonal();
  const double half = kPi / (2.0 * k);
  const std::string suffix = ":" + std::to_string(k);
  switch (kind) {
    case GroupKind::Pyramidal:
      return generate_group({vertical_reflection(-half), vertical_reflection(half)}, "pyramidal" + suffix);
    case GroupKind::Prismatic:
      return generate_group({vertical_reflection(-half), vertical_reflection(half), refl_z}, "prismatic" + suffix);
    case GroupKind::Antiprismatic:
      return generate_group({vertical_reflection(half), rot_x}, "antiprismatic" + suffix);
    case GroupKind::ReflectionPlane:
      return generate_group({refl_z}, "reflection_plane");
    case GroupKind::ReflectionLine:
      return generate_group({rot_x}, "reflection_line");
  }
  throw InvalidInput("unknown group kind");
}

GroupAction parse_group(const std::string& text) {
  if (text == "trivial") return generate_group({}, "trivial");
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int k = 1;
  if (colon != std::string::npos) {
    try {
      size_t used = 0;
      k = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInput("bad group order in '" + text + "'");
    }
  }
  return standard_group(group_kind_from_name(kind), k);
}

int find_element(const GroupAction& g, const Eigen::Matrix3d& m) {
  for (int i = 0; i < g.order(); ++i)
    if (same(g.elements[i], m)) return i;
  return -1;
}

std::vector<std::vector<int>> multiplication_table(const GroupAction& g) {
  std::vector<std::vector<int>> t(g.order(), std::vector<int>(g.order()));
  for (int i = 0; i < g.order(); ++i)
    for (int j = 0; j < g.order(); ++j) {
      t[i][j] = find_element(g, g.elements[i] * g.elements[j]);
      if (t[i][j] < 0) throw InvalidInput("element set is not closed under composition");
    }
  return t;
}

TwistKind twist_kind_from_name(const std::string& name) {
  if (name == "trivial") return TwistKind::Trivial;
  if (name == "determinant") return TwistKind::Determinant;
  if (name == "normal_sign") return TwistKind::NormalSign;
  if (name == "explicit") return TwistKind::Explicit;
  throw InvalidInput("unknown twist '" + name + "'");
}

GroupAction with_twist(const GroupAction& g, TwistKind kind, const SurfaceMesh* mesh,
                       const std::vector<int>& explicit_table) {
  GroupAction out = g;
  switch (kind) {
    case TwistKind::Trivial:
      out.twist.assign(g.order(), 1);
      break;
    case TwistKind::Determinant:
      for (int i = 0; i < g.order(); ++i) out.twist[i] = g.elements[i].determinant() > 0 ? 1 : -1;
      break;
    case TwistKind::NormalSign: {
      if (!mesh) throw InvalidInput("normal_sign twist needs a mesh");
      if (!out.acts()) out = act_on_mesh(out, *mesh);
      for (int i = 0; i < g.order(); ++i) {
        int sign = 0;
        for (int t = 0; t < mesh->triangle_count(); ++t) {
          const Vec3 pushed = g.elements[i] * triangle_normal(*mesh, t);
          const double c = pushed.dot(triangle_normal(*mesh, out.triangle_maps[i][t]));
          const int s = c > 0.5 ? 1 : (c < -0.5 ? -1 : 0);
          if (s == 0 || (sign != 0 && s != sign))
            throw InvalidInput("normal sign is not constant for element " + std::to_string(i) +
                               "; surface is not invariant as an oriented surface");
          sign = s;
        }
        out.twist[i] = sign == 0 ? 1 : sign;
      }
      break;
    }
    case TwistKind::Explicit:
      if (static_cast<int>(explicit_table.size()) != g.order())
        throw InvalidInput("explicit twist needs one sign per group element (" + std::to_string(g.order()) + ")");
      for (int s : explicit_table)
        if (s != 1 && s != -1) throw InvalidInput("twist entries must be +1 or -1");
      out.twist = explicit_table;
      break;
  }
  const auto table = multiplication_table(out);
  for (int i = 0; i < g.order(); ++i)
    for (int j = 0; j < g.order(); ++j)
      if (out.twist[table[i][j]] != out.twist[i] * out.twist[j])
        throw InvalidInput("twist is not a homomorphism");
  return out;
}

GroupAction act_on_mesh(const GroupAction& g, const SurfaceMesh& mesh, double tol) {
  GroupAction out = g;
  out.vertex_maps.clear();
  out.triangle_maps.clear();
  const int n = mesh.vertex_count();
  VertexLocator loc(mesh.vertices, tol);
  std::map<std::array<int, 3>, int> tri_index;
  std::vector<std::vector<int>> vertex_triangles(n);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    tri_index[sorted(mesh.triangles[t])] = t;
    for (int v : mesh.triangles[t]) vertex_triangles[v].push_back(t);
  }
  std::map<std::uint64_t, BoundaryTag> tags;
  for (const auto& e : mesh.boundary_edges) tags[edge_key(e.v[0], e.v[1])] = e.tag;

  for (int i = 0; i < g.order(); ++i) {
    std::vector<int> map = match_vertices(g.elements[i], mesh, loc, tri_index, vertex_triangles);
    std::vector<char> hit(n, 0);
    for (int v : map) {
      if (hit[v]) throw InvalidInput("group element does not permute the vertices bijectively");
      hit[v] = 1;
    }
    std::vector<int> tmap(mesh.triangles.size());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles[t];
      auto it = tri_index.find(sorted({map[tri[0]], map[tri[1]], map[tri[2]]}));
      if (it == tri_index.end()) throw InvalidInput("group element does not map triangles to triangles");
      tmap[t] = it->second;
    }
    for (const auto& e : mesh.boundary_edges) {
      auto it = tags.find(edge_key(map[e.v[0]], map[e.v[1]]));
      if (it == tags.end() || it->second != e.tag)
        throw InvalidInput("group element does not preserve the boundary decomposition");
    }
    out.vertex_maps.push_back(std::move(map));
    out.triangle_maps.push_back(std::move(tmap));
  }
  return out;
}

void check_invariant(const GroupAction& g, const ProblemSpec& p, double tol) {
  if (!g.acts()) throw InvalidInput("group has not been realized on the mesh");
  if (static_cast<int>(g.vertex_maps[0].size()) != p.vertex_count())
    throw InvalidInput("group action was realized on a different mesh");
  for (const auto& map : g.vertex_maps)
    for (int v = 0; v < p.vertex_count(); ++v) {
      const double sq = std::max(1.0, std::abs(p.potential[v]));
      if (std::abs(p.potential[map[v]] - p.potential[v]) > tol * sq)
        throw InvalidInput("potential is not invariant under the group");
      const double sr = std::max(1.0, std::abs(p.robin[v]));
      if (std::abs(p.robin[map[v]] - p.robin[v]) > tol * sr)
        throw InvalidInput("Robin coefficient is not invariant under the group");
    }
  if (!p.mesh.metric_override.empty()) {
    for (const auto& tmap : g.triangle_maps)
      for (int t = 0; t < p.mesh.triangle_count(); ++t) {
        const double a = triangle_area(p.mesh, t), b = triangle_area(p.mesh, tmap[t]);
        if (std::abs(a - b) > tol * std::max(a, b)) throw InvalidInput("metric is not invariant under the group");
      }
  }
}

std::vector<double> twisted_project(const GroupAction& g, const std::vector<double>& values) {
  if (!g.acts()) throw InvalidInput("group has not been realized on a mesh");
  const size_t n = values.size();
  if (g.vertex_maps[0].size() != n) throw InvalidInput("value count does not match the mesh");
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < g.order(); ++i) {
    const auto& map = g.vertex_maps[i];
    for (size_t w = 0; w < n; ++w) out[map[w]] += g.twist[i] * values[w];
  }
  for (double& v : out) v /= g.order();
  return out;
}

FundamentalDomain fundamental_domain(const ProblemSpec& p, const GroupAction& g) {
  if (!g.acts()) throw InvalidInput("group has not been realized on the mesh");
  const SurfaceMesh& mesh = p.mesh;
  const int nt = mesh.triangle_count();
  const int order = g.order();
  for (int i = 1; i < order; ++i)
    for (int t = 0; t < nt; ++t)
      if (g.triangle_maps[i][t] == t)
        throw InvalidInput("a triangle is fixed by a non-identity element; refine the mesh symmetrically");

  std::vector<int> orbit(nt, -1);
  int orbits = 0;
  for (int t = 0; t < nt; ++t) {
    if (orbit[t] >= 0) continue;
    for (int i = 0; i < order; ++i) orbit[g.triangle_maps[i][t]] = orbits;
    ++orbits;
  }

  // Pointwise stabilizer of an edge: elements fixing both endpoints.
  auto edge_stabilizer = [&](int a, int b) {
    std::vector<int> s;
    for (int i = 0; i < order; ++i)
      if (g.vertex_maps[i][a] == a && g.vertex_maps[i][b] == b) s.push_back(i);
    return s;
  };

  EdgeTopology topo(mesh);
  std::vector<std::vector<std::pair<int, std::array<int, 2>>>> across(nt);
  for (const auto& [key, inc] : topo.edges)
    if (inc.triangles.size() == 2) {
      across[inc.triangles[0]].push_back({inc.triangles[1], inc.v});
      across[inc.triangles[1]].push_back({inc.triangles[0], inc.v});
    }

  std::vector<char> taken(nt, 0), represented(orbits, 0);
  std::vector<int> chosen;
  std::queue<int> q;
  q.push(0);
  taken[0] = 1;
  represented[orbit[0]] = 1;
  while (!q.empty()) {
    const int t = q.front();
    q.pop();
    chosen.push_back(t);
    for (const auto& [u, e] : across[t]) {
      if (taken[u] || represented[orbit[u]]) continue;
      if (edge_stabilizer(e[0], e[1]).size() > 1) continue;  // mirror edge
      taken[u] = 1;
      represented[orbit[u]] = 1;
      q.push(u);
    }
  }
  if (static_cast<int>(chosen.size()) != orbits) {
    int components = 0;
    triangle_components(mesh, &components);
    if (components > 1)
      throw InvalidInput("group does not act transitively on the components of a disconnected domain");
    throw InvalidInput("no connected fundamental domain bounded by mirror edges");
  }
  std::sort(chosen.begin(), chosen.end());

  FundamentalDomain fd;
  fd.triangles = chosen;
  fd.submesh = extract_submesh(mesh, chosen, BoundaryTag::Neumann);
  SurfaceMesh& sub = fd.submesh.mesh;
  std::set<std::uint64_t> interface_keys;
  for (const auto& e : fd.submesh.interface_edges) {
    const int a = fd.submesh.vertex_to_parent[e[0]], b = fd.submesh.vertex_to_parent[e[1]];
    const auto stab = edge_stabilizer(a, b);
    if (stab.size() > 2) throw InvalidInput("interface edge has a pointwise stabilizer of order > 2");
    if (stab.size() < 2) throw InvalidInput("interface edge is not a mirror edge (sigma_p = 0); cannot classify");
    const int sigma = g.twist[stab[1]];
    (sigma > 0 ? fd.interface_plus : fd.interface_minus).push_back({a, b});
    if (sigma < 0) interface_keys.insert(edge_key(e[0], e[1]));
  }
  for (auto& be : sub.boundary_edges)
    if (interface_keys.count(edge_key(be.v[0], be.v[1]))) be.tag = BoundaryTag::Dirichlet;

  // With one representative per orbit and free triangle action, only the
  // identity preserves Omega_1.
  fd.stabilizer = generate_group({}, "trivial");
  fd.stabilizer.twist = {g.twist[0]};
  return fd;
}

ProblemSpec fundamental_domain_reduce(const ProblemSpec& p, const GroupAction& g, FundamentalDomain* detail) {
  check_invariant(g, p);
  FundamentalDomain fd = fundamental_domain(p, g);
  ProblemSpec out = make_problem(fd.submesh.mesh, p.level, p.name + "/fundamental_domain");
  for (int v = 0; v < out.vertex_count(); ++v) {
    const int pv = fd.submesh.vertex_to_parent[v];
    out.potential[v] = p.potential[pv];
    out.robin[v] = p.robin[pv];
  }
  if (p.conformal_factor) {
    std::vector<double> rho(out.vertex_count());
    for (int v = 0; v < out.vertex_count(); ++v) rho[v] = (*p.conformal_factor)[fd.submesh.vertex_to_parent[v]];
    out.conformal_factor = rho;
  }
  out.potential_source = p.potential_source;
  out.robin_source = p.robin_source;
  if (detail) *detail = std::move(fd);
  return out;
}

}  // namespace equispec
