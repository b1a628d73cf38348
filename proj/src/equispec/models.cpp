#include "equispec/models.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include <Eigen/SparseCholesky>

#include "equispec/eigensolver.hpp"

namespace equispec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const CatenoidParams& c) {
  if (!(c.a > 0.0 && c.h > 0.0 && c.s > 0.0)) throw InvalidInput("catenoid parameters must be positive");
}

}  // namespace

K0Profile k0_profile(double zeta, const CatenoidParams& c) {
  check_params(c);
  if (zeta < -1e-12 || zeta > c.h + 1e-12) throw InvalidInput("zeta outside [0, h]");
  const double arg = c.a * zeta - c.s;
  const double ch = std::cosh(arg);
  K0Profile p;
  p.r = ch / c.a;
  p.dr = std::sinh(arg);
  p.A2 = (c.a * c.a + 1.0 / (c.a * c.a)) / (ch * ch * ch * ch);
  p.g_zeta = ch * ch;
  p.g_theta = p.r * p.r;
  return p;
}

SLSpectrum sl_solve(const SturmLiouville& sl, int count) {
  if (count < 1) throw InvalidInput("eigenvalue count must be positive");
  if (!(sl.length > 0.0) || sl.intervals < 2) throw InvalidInput("invalid Sturm-Liouville interval");
  const int n = sl.intervals;
  const double dx = sl.length / n;
  // 3-point Gauss on each element
  const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  std::vector<int> row(n + 1, -1);
  int dofs = 0;
  for (int i = 0; i <= n; ++i) {
    if ((i == 0 && sl.left_dirichlet) || (i == n && sl.right_dirichlet)) continue;
    row[i] = dofs++;
  }
  std::vector<Eigen::Triplet<double>> kt, mt;
  double max_ratio = 0.0;
  for (int e = 0; e < n; ++e) {
    double k[2][2] = {}, m[2][2] = {};
    for (int g = 0; g < 3; ++g) {
      const double x = (e + gx[g]) * dx;
      const double phi[2] = {1.0 - gx[g], gx[g]};
      const double dphi[2] = {-1.0 / dx, 1.0 / dx};
      const double p = sl.p(x), q = sl.Q(x), w = sl.W(x);
      if (!(w > 0.0)) throw InvalidInput("Sturm-Liouville weight must be positive");
      max_ratio = std::max(max_ratio, std::max(q, 0.0) / w);  // only q > 0 lowers K
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          k[a][b] += gw[g] * dx * (p * dphi[a] * dphi[b] - q * phi[a] * phi[b]);
          m[a][b] += gw[g] * dx * w * phi[a] * phi[b];
        }
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int i = row[e + a], j = row[e + b];
        if (i < 0 || j < 0) continue;
        kt.emplace_back(i, j, k[a][b]);
        mt.emplace_back(i, j, m[a][b]);
      }
  }
  if (row[n] >= 0 && sl.right_robin != 0.0) kt.emplace_back(row[n], row[n], -sl.right_robin);
  Eigen::SparseMatrix<double> K(dofs, dofs), M(dofs, dofs);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());

  double shift = 1.0 + max_ratio + std::abs(sl.right_robin) / (sl.W(sl.length) * dx);
  for (int attempt = 0; attempt < 60; ++attempt) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K + shift * M);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) break;
    shift *= 2.0;
  }
  EigenOptions eo;
  eo.count = std::min(count, dofs);
  eo.shift = shift;
  eo.seed = 0x5eed5eedULL + static_cast<std::uint64_t>(n);
  const EigenResult r = solve_generalized(K, M, eo);

  SLSpectrum out;
  out.eigenvalues.assign(r.values.data(), r.values.data() + r.values.size());
  out.residuals = r.residuals;
  out.grid.resize(n + 1);
  for (int i = 0; i <= n; ++i) out.grid[i] = i * dx;
  out.functions.setZero(n + 1, r.values.size());
  for (int i = 0; i <= n; ++i)
    if (row[i] >= 0) out.functions.row(i) = r.vectors.row(row[i]);
  return out;
}

SturmLiouville k0_mode_problem(int ell, bool left_dirichlet, const CatenoidParams& c, int intervals) {
  check_params(c);
  if (ell < 0) throw InvalidInput("mode index must be >= 0");
  SturmLiouville sl;
  sl.length = c.h;
  const double a = c.a, s = c.s;
  const double A = a * a + 1.0 / (a * a);
  sl.Q = [=](double z) {
    const double ch = std::cosh(a * z - s);
    return A / (ch * ch) - a * a * ell * ell;
  };
  sl.W = [=](double z) {
    const double ch = std::cosh(a * z - s);
    return ch * ch;
  };
  sl.left_dirichlet = left_dirichlet;
  sl.right_robin = std::cosh(a * c.h - s);
  sl.intervals = intervals;
  return sl;
}

SturmLiouville disk_mode_problem(int ell, int intervals) {
  if (ell < 0) throw InvalidInput("mode index must be >= 0");
  SturmLiouville sl;
  sl.length = 1.0;
  sl.p = [](double r) { return r; };
  sl.Q = [ell](double r) { return -static_cast<double>(ell * ell) / r; };
  sl.W = [](double r) { return r; };
  sl.left_dirichlet = ell > 0;  // regular solutions vanish at the centre
  sl.intervals = intervals;
  return sl;
}

int mode_multiplicity(const GroupAction& g, int ell) {
  double sum = 0.0;
  for (int i = 0; i < g.order(); ++i) {
    const Eigen::Matrix3d& R = g.elements[i];
    if (std::abs(R(2, 2) - 1.0) > 1e-10)
      throw InvalidInput("mode decomposition needs a group fixing the z-axis pointwise");
    double trace;
    if (ell == 0) {
      trace = 1.0;
    } else if (R.determinant() > 0.0) {
      trace = 2.0 * std::cos(ell * std::atan2(R(1, 0), R(0, 0)));
    } else {
      trace = 0.0;  // reflections swap the two eigenlines with opposite signs
    }
    sum += g.twist[i] * trace;
  }
  return static_cast<int>(std::lround(sum / g.order()));
}

ProblemSpec k0_problem(int level, int k, BoundaryTag left, const CatenoidParams& c, bool pair) {
  check_params(c);
  if (k < 1) throw InvalidInput("group order parameter k must be >= 1");
  const int n_theta = 2 * k * static_cast<int>(std::ceil(16.0 / (2.0 * k)));
  Params params{{"a", c.a}, {"h", c.h}, {"s", c.s}, {"n_theta", double(n_theta)}, {"theta0", kPi / (2.0 * k)}};
  SurfaceMesh mesh = build_builtin(pair ? Domain::UnionPmK0 : Domain::CatenoidK0, level, params);
  ProblemSpec p = make_problem(std::move(mesh), level, pair ? "union_pm_K0" : "catenoid_K0");
  set_potential(p, jacobi_potential(*p.mesh.chart));
  tag_robin_top(p);
  if (left != BoundaryTag::Neumann)
    tag_boundary(p, [](const Vec3& m) { return std::abs(m.z()) < 1e-9; }, left);
  return p;
}

K0EquivariantIndex k0_equivariant_index(int k, double zero_tol, const CatenoidParams& c, const std::string& left) {
  if (left != "neumann" && left != "dirichlet") throw InvalidInput("left condition must be neumann or dirichlet");
  const bool dir = left == "dirichlet";
  // The twist is read off a realized mesh rather than assumed.
  const ProblemSpec coarse = k0_problem(0, k, dir ? BoundaryTag::Dirichlet : BoundaryTag::Neumann, c);
  const GroupAction g = with_twist(standard_group(GroupKind::Pyramidal, k), TwistKind::NormalSign, &coarse.mesh);

  K0EquivariantIndex out;
  out.k = k;
  for (int ell = 0; ell < 4096; ++ell) {
    const int mult = mode_multiplicity(g, ell);
    if (mult == 0) continue;
    ModeRecord rec;
    rec.ell = ell;
    rec.multiplicity = mult;
    int count = 4;
    for (;;) {
      rec.eigenvalues = sl_solve(k0_mode_problem(ell, dir, c), count).eigenvalues;
      if (rec.eigenvalues.back() > zero_tol) break;
      count *= 2;
    }
    for (double l : rec.eigenvalues) {
      if (l < -zero_tol) ++rec.negative;
      else if (l <= zero_tol) ++rec.zero;
    }
    out.index += mult * rec.negative;
    out.nullity += mult * rec.zero;
    const bool done = ell > 0 && rec.eigenvalues.front() > zero_tol;
    out.modes.push_back(std::move(rec));
    // Mode eigenvalues increase with ell, so nothing further contributes.
    if (done) break;
  }
  return out;
}

int k0_k_min(double zero_tol, const CatenoidParams& c, int k_max) {
  for (int k = 1; k <= k_max; ++k)
    if (sl_solve(k0_mode_problem(k, false, c), 1).eigenvalues.front() > zero_tol) return k;
  throw InvalidInput("no k up to " + std::to_string(k_max) + " has a positive mode-k eigenvalue");
}

K0Certificate k0_certificate(const CatenoidParams& c) {
  check_params(c);
  K0Certificate cert;
  const double A = c.a * c.a + 1.0 / (c.a * c.a);
  const double ch = std::cosh(c.a * c.h - c.s);
  cert.left_constant = std::sqrt(2.0 / A);
  // With d = h - z0, the Robin-side bound A + (2/d^2)(d ch - 1) is negative
  // exactly when A d^2 + 2 ch d - 2 < 0.
  const double d = (-ch + std::sqrt(ch * ch + 2.0 * A)) / A;
  cert.right_constant = c.h - d;
  cert.robin_factor = d * ch - 1.0;
  cert.overlap = cert.robin_factor < 0.0 && cert.right_constant <= cert.left_constant && cert.right_constant < c.h;
  cert.lambda2 = sl_solve(k0_mode_problem(0, false, c), 2).eigenvalues[1];
  cert.lambda2_positive = cert.lambda2 > 0.0;
  const double rh = ch / c.a;
  cert.boundary_residual = rh * rh + c.h * c.h - 1.0;
  return cert;
}

std::vector<double> killing_jacobi_field(const SurfaceMesh& mesh, const Vec3& axis) {
  if (!(axis.norm() > 0.0)) throw InvalidInput("rotation axis must be non-zero");
  const Vec3 xi = axis.normalized();
  const auto normals = vertex_normals(mesh);
  std::vector<double> k(mesh.vertices.size());
  for (size_t v = 0; v < k.size(); ++v) k[v] = xi.cross(mesh.vertices[v]).dot(normals[v]);
  return k;
}

NodalDomains nodal_domains(const SurfaceMesh& mesh, const std::vector<double>& values, double tol) {
  if (static_cast<int>(values.size()) != mesh.vertex_count()) throw InvalidInput("expected one value per vertex");
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (tol < 0.0) tol = 1e-6 * peak;
  if (!(peak > tol)) throw InvalidInput("function vanishes to within the nodal tolerance");

  const int nt = mesh.triangle_count();
  std::vector<int> sign(nt, 0);
  for (int t = 0; t < nt; ++t) {
    bool pos = false, neg = false;
    for (int v : mesh.triangles[t]) {
      if (values[v] > tol) pos = true;
      if (values[v] < -tol) neg = true;
    }
    sign[t] = pos && !neg ? 1 : (neg && !pos ? -1 : 0);
  }
  EdgeTopology topo(mesh);
  std::vector<std::vector<int>> adj(nt);
  for (const auto& [key, inc] : topo.edges)
    if (inc.triangles.size() == 2) {
      adj[inc.triangles[0]].push_back(inc.triangles[1]);
      adj[inc.triangles[1]].push_back(inc.triangles[0]);
    }
  NodalDomains out;
  out.labels.assign(nt, -1);
  for (int t = 0; t < nt; ++t) {
    if (sign[t] == 0 || out.labels[t] >= 0) continue;
    std::queue<int> q;
    q.push(t);
    out.labels[t] = out.count;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (out.labels[w] < 0 && sign[w] == sign[t]) {
          out.labels[w] = out.count;
          q.push(w);
        }
    }
    out.signs.push_back(sign[t]);
    ++out.count;
  }
  return out;
}

ProblemSpec sphere_table_problem(int row, int level, double zeta) {
  ProblemSpec p;
  auto on_x0 = [](const Vec3& m) { return std::abs(m.x()) < 1e-9; };
  switch (row) {
    case 1:
    case 2:
      p = make_problem(build_builtin(Domain::SphereOctant, level), level, sphere_table_label(row));
      if (row == 2) tag_boundary(p, [](const Vec3& m) { return std::abs(m.z()) < 1e-9; }, BoundaryTag::Dirichlet);
      break;
    case 3:
    case 4:
    case 5:
      // Rows 3-5 share the cut lune mesh so their spectra are comparable
      // entry by entry.
      p = make_problem(build_builtin(Domain::LuneCut, level, {{"zeta", zeta}}), level, sphere_table_label(row));
      if (row == 4) tag_boundary(p, on_x0, BoundaryTag::Dirichlet);
      if (row == 5)
        tag_boundary(p, [&](const Vec3& m) { return on_x0(m) && m.z() > zeta; }, BoundaryTag::Dirichlet);
      break;
    default:
      throw InvalidInput("sphere table rows are numbered 1-5");
  }
  set_potential_constant(p, 2.0);
  return p;
}

std::pair<int, int> sphere_table_expected(int row) {
  static const std::pair<int, int> rows[5] = {{1, 0}, {0, 1}, {1, 1}, {0, 1}, {1, 0}};
  if (row < 1 || row > 5) throw InvalidInput("sphere table rows are numbered 1-5");
  return rows[row - 1];
}

std::string sphere_table_label(int row) {
  static const char* labels[5] = {"octant, all Neumann", "octant, Dirichlet on z=0", "lune, all Neumann",
                                  "lune, Dirichlet on x=0", "lune, Dirichlet on x=0 above zeta"};
  if (row < 1 || row > 5) throw InvalidInput("sphere table rows are numbered 1-5");
  return labels[row - 1];
}

ProblemSpec disk_problem(int level, int n_sectors) {
  return make_problem(build_builtin(Domain::UnitDisk, level, {{"n_sectors", double(n_sectors)}}), level, "unit_disk");
}

}  // namespace equispec
