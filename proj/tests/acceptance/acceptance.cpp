// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (0 when everything passes).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "equispec/models.hpp"
#include "equispec/montielros.hpp"
#include "equispec/reproduce.hpp"
#include "oracles.hpp"

using namespace equispec;

namespace {

constexpr double kZeroTol = 0.05;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::pair<int, int> counts_from(const std::vector<double>& values) {
  int ind = 0, nul = 0;
  for (double l : values) {
    if (l < -kZeroTol) ++ind;
    else if (l <= kZeroTol) ++nul;
  }
  return {ind, nul};
}

// Extrapolated values, or the finest level where extrapolation was refused.
std::vector<double> best_values(const ConvergenceStudy& st) {
  std::vector<double> out;
  for (const auto& r : st.rows) out.push_back(r.crossing ? r.values.back() : r.extrapolated);
  return out;
}

double mass_correlation(const ProblemSpec& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  SparseMatrix K, M;
  assemble_full(p, K, M);
  return std::abs(u.dot(M * v)) / std::sqrt(u.dot(M * u) * v.dot(M * v));
}

ProblemSpec with_q(Domain d, int level, double q, Params params = {}) {
  ProblemSpec p = make_problem(build_builtin(d, level, params), level);
  set_potential_constant(p, q);
  return p;
}

double relative_gap(const std::vector<double>& a, const std::vector<double>& b, size_t n) {
  double worst = 0.0;
  if (a.size() < n || b.size() < n) return INFINITY;
  for (size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  return worst;
}

// ---------------------------------------------------------------------------

void sphere_table(Outcome& o) {
  for (int row = 1; row <= 5; ++row) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceStudy st = convergence_study(sphere_table_problem(row, 3), 3, 4);
    const double secs = seconds_since(t0);
    const auto got = counts_from(best_values(st));
    const auto want = sphere_table_expected(row);
    o.detail << "row" << row << "=(" << got.first << "," << got.second << ") " << std::fixed;
    o.detail.precision(2);
    o.detail << secs << "s; ";
    o.require(got == want, "row " + std::to_string(row));
    o.require(secs < 60.0, "row " + std::to_string(row) + " time");
  }
}

void octant_and_lune(Outcome& o) {
  const ConvergenceStudy oct = convergence_study(sphere_table_problem(1, 3), 3, 3);
  double worst = 0.0;
  for (double v : oct.rows[0].values) worst = std::max(worst, std::abs(v + 2.0));
  const double l2 = oct.rows[1].extrapolated;
  o.detail << "octant max|l1+2|=" << worst << " l2_extrap=" << l2 << "; ";
  o.require(worst <= 1e-6, "octant lambda_1 exact");
  o.require(std::abs(l2 - 4.0) <= 0.04, "octant lambda_2 within 1%");

  const ConvergenceStudy lune = convergence_study(sphere_table_problem(4, 3), 3, 2);
  const double l1 = lune.rows[0].extrapolated;
  const ProblemSpec finest = refine_problem(refine_problem(sphere_table_problem(4, 3)));
  const Spectrum& s = lune.spectra.back();
  Eigen::VectorXd x(finest.vertex_count());
  for (int v = 0; v < finest.vertex_count(); ++v) x[v] = finest.mesh.vertices[v].x();
  const double overlap = mass_correlation(finest, s.eigenfunctions.col(0), x);
  o.detail << "lune l1_extrap=" << l1 << " overlap(x)=" << overlap;
  o.require(std::abs(l1) <= kZeroTol, "lune lambda_1 near 0");
  o.require(overlap >= 0.99, "lune eigenfunction ~ x");
}

void catenoid(Outcome& o) {
  const SLSpectrum sl = sl_solve(k0_mode_problem(0, false), 2);
  o.detail << "SL mode0 l1=" << sl.eigenvalues[0] << " l2=" << sl.eigenvalues[1] << "; ";
  o.require(sl.eigenvalues[0] < -0.1 && sl.eigenvalues[1] > 0.1, "mode-0 signs");

  const int k_min = k0_k_min(kZeroTol);
  o.detail << "k_min=" << k_min << "; ";
  for (int k = k_min; k <= k_min + 8; ++k) {
    const K0EquivariantIndex e = k0_equivariant_index(k, kZeroTol);
    o.require(e.index == 1 && e.nullity == 0, "Y_" + std::to_string(k) + " (1,0)");
  }
  // the same count from the surface discretization for the first two k
  for (int k = k_min; k <= k_min + 1; ++k) {
    const ProblemSpec p = k0_problem(3, k);
    const GroupAction g =
        with_twist(act_on_mesh(standard_group(GroupKind::Pyramidal, k), p.mesh), TwistKind::NormalSign, &p.mesh);
    SolveOptions opts;
    opts.count = 3;
    const IndexNullity in = index_nullity(solve_covering(p, kZeroTol, opts, &g), kZeroTol);
    o.detail << "2D Y_" << k << "=(" << in.index << "," << in.nullity << ") ";
    o.require(in.index == 1 && in.nullity == 0, "2D Y_" + std::to_string(k));
  }

  // 1D modes against the surface solve. Y_4 with trivial twist sees modes
  // 0, 4, 8, ...; Y_l with the determinant twist sees l, 2l, ... and no
  // mode 0, so its lowest eigenvalue is the first one of mode l.
  double worst = 0.0;
  {
    const ProblemSpec p = k0_problem(4, 4);
    const GroupAction g = act_on_mesh(standard_group(GroupKind::Pyramidal, 4), p.mesh);
    const Spectrum s = solve_equivariant(p, g, {.count = 2});
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, std::abs(s.eigenvalues[i] - sl.eigenvalues[i]) / std::abs(sl.eigenvalues[i]));
  }
  for (int ell = 1; ell <= 3; ++ell) {
    const double one_d = sl_solve(k0_mode_problem(ell, false), 1).eigenvalues[0];
    const ProblemSpec p = k0_problem(4, ell);
    const GroupAction g =
        with_twist(act_on_mesh(standard_group(GroupKind::Pyramidal, ell), p.mesh), TwistKind::Determinant);
    const double two_d = solve_equivariant(p, g, {.count = 1}).eigenvalues[0];
    worst = std::max(worst, std::abs(two_d - one_d) / std::abs(one_d));
  }
  o.detail << "1D/2D max rel diff=" << worst << "; ";
  o.require(worst <= 0.01, "1D vs 2D within 1%");

  const K0Certificate c = k0_certificate();
  o.detail << "certificate " << c.left_constant << ", " << c.right_constant;
  o.require(std::abs(c.left_constant - 0.5962) <= 5e-4, "left constant");
  o.require(std::abs(c.right_constant - 0.4443) <= 5e-4, "right constant");
}

void disk(Outcome& o) {
  SolveOptions opts;
  opts.count = 3;
  const IndexNullity plain = index_nullity(solve_covering(disk_problem(4), kZeroTol, opts), kZeroTol);
  o.detail << "plain=(" << plain.index << "," << plain.nullity << ") ";
  o.require(plain.index == 0 && plain.nullity == 1, "plain (0,1)");
  for (int m = 1; m <= 3; ++m) {
    const ProblemSpec p = disk_problem(3, 4 * (m + 1));
    const GroupAction g = with_twist(act_on_mesh(standard_group(GroupKind::Antiprismatic, m + 1), p.mesh),
                                     TwistKind::NormalSign, &p.mesh);
    const IndexNullity in = index_nullity(solve_covering(p, kZeroTol, opts, &g), kZeroTol);
    o.detail << "A_" << m + 1 << "=(" << in.index << "," << in.nullity << ") ";
    o.require(in.index == 0 && in.nullity == 0, "A_" + std::to_string(m + 1));
  }
  const double j = oracle::bessel_j1_prime_root();
  const double bessel = j * j;
  const double l2 = convergence_study(disk_problem(3), 3, 3).rows[1].extrapolated;
  o.detail << "l2_extrap=" << l2 << " bessel=" << bessel;
  o.require(std::abs(l2 - bessel) <= 0.005 * bessel, "lambda_2 vs Bessel oracle");
  o.require(std::abs(bessel - 3.390) <= 0.005 * 3.390, "oracle vs 3.390");
}

void domain_reduction(Outcome& o) {
  // The identity is exact at every level; level 3 keeps the roundoff floor
  // (about eps |K| / |M|) well below 1e-9 of the smallest eigenvalue.
  const int level = 3;
  const ProblemSpec full = with_q(Domain::FullSphere, level, 2.0);
  const GroupAction refl = act_on_mesh(parse_group("reflection_plane"), full.mesh);
  ProblemSpec hemi_n = with_q(Domain::SphereHemisphere, level, 2.0);
  ProblemSpec hemi_d = hemi_n;
  tag_boundary(hemi_d, [](const Vec3&) { return true; }, BoundaryTag::Dirichlet);
  const SolveOptions opts{.count = 5};
  double worst = 0.0;
  for (int sign : {1, -1}) {
    const GroupAction g = with_twist(refl, TwistKind::Explicit, nullptr, {1, sign});
    const auto ref = solve(sign > 0 ? hemi_n : hemi_d, opts).eigenvalues;
    for (Strategy st : {Strategy::ProjectedSubspace, Strategy::FundamentalDomain})
      worst = std::max(worst, relative_gap(solve_equivariant(full, g, opts, st).eigenvalues, ref, 5));
  }
  o.detail << "refl_z max rel diff=" << worst << "; ";
  o.require(worst <= 1e-9, "hemisphere N/D");

  // P_2 on the sphere: the fundamental wedge is a rotated octant
  const ProblemSpec s2 = with_q(Domain::FullSphere, level + 1, 2.0, {{"k", 2}, {"theta0", kPi / 4}});
  const GroupAction p2 =
      with_twist(act_on_mesh(standard_group(GroupKind::Prismatic, 2), s2.mesh), TwistKind::NormalSign, &s2.mesh);
  const auto octant = solve(with_q(Domain::SphereOctant, level + 1, 2.0), opts).eigenvalues;
  const double gap2 = relative_gap(solve_equivariant(s2, p2, opts).eigenvalues, octant, 5);
  o.detail << "P_2 vs octant=" << gap2 << "; ";
  o.require(gap2 <= 1e-9, "P_2 wedge");

  const ProblemSpec s3 = with_q(Domain::FullSphere, 3, 2.0, {{"k", 3}, {"theta0", kPi / 6}});
  const GroupAction p3 =
      with_twist(act_on_mesh(standard_group(GroupKind::Prismatic, 3), s3.mesh), TwistKind::NormalSign, &s3.mesh);
  const ProblemSpec wedge = fundamental_domain_reduce(s3, p3);
  bool all_neumann = !wedge.mesh.boundary_edges.empty();
  for (const auto& e : wedge.mesh.boundary_edges) all_neumann = all_neumann && e.tag == BoundaryTag::Neumann;
  const double gap3 = relative_gap(solve_equivariant(s3, p3, opts).eigenvalues, solve(wedge, opts).eigenvalues, 5);
  o.detail << "P_3 projected vs wedge=" << gap3;
  o.require(all_neumann, "P_3 wedge sides Neumann");
  o.require(gap3 <= 1e-9, "P_3 wedge");
}

// Region growing from random seed triangles over edge adjacency.
Partition random_partition(const SurfaceMesh& m, int pieces, std::mt19937_64& rng) {
  const int nt = m.triangle_count();
  EdgeTopology topo(m);
  std::vector<std::vector<int>> adj(nt);
  for (const auto& [key, inc] : topo.edges)
    if (inc.triangles.size() == 2) {
      adj[inc.triangles[0]].push_back(inc.triangles[1]);
      adj[inc.triangles[1]].push_back(inc.triangles[0]);
    }
  std::vector<int> owner(nt, -1);
  std::vector<std::vector<int>> frontier(pieces);
  std::uniform_int_distribution<int> pick(0, nt - 1);
  for (int i = 0; i < pieces; ++i) {
    int t;
    do t = pick(rng);
    while (owner[t] >= 0);
    owner[t] = i;
    frontier[i].push_back(t);
  }
  for (int left = nt - pieces; left > 0;) {
    const int i = std::uniform_int_distribution<int>(0, pieces - 1)(rng);
    auto& f = frontier[i];
    if (f.empty()) continue;
    const size_t at = std::uniform_int_distribution<size_t>(0, f.size() - 1)(rng);
    const int t = f[at];
    bool grew = false;
    for (int w : adj[t])
      if (owner[w] < 0) {
        owner[w] = i;
        f.push_back(w);
        --left;
        grew = true;
        break;
      }
    if (!grew) f.erase(f.begin() + static_cast<long>(at));
  }
  Partition p;
  p.pieces.resize(pieces);
  for (int t = 0; t < nt; ++t) p.pieces[owner[t]].push_back(t);
  return p;
}

void montiel_ros(Outcome& o) {
  std::mt19937_64 rng(20240611);
  struct Case {
    std::string name;
    ProblemSpec p;
  };
  ProblemSpec disk_q = disk_problem(3);
  set_potential_constant(disk_q, 3.0);
  const std::vector<Case> cases = {{"sphere", with_q(Domain::FullSphere, 2, 2.0)},
                                   {"octant", with_q(Domain::SphereOctant, 3, 2.0)},
                                   {"disk", disk_problem(3)},
                                   {"disk q=3", disk_q}};
  int configs = 0, held = 0, caught = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Case& c = cases[trial % cases.size()];
    const int pieces = 2 + trial % 3;
    const Partition part = random_partition(c.p.mesh, pieces, rng);
    MontielRosReport r;
    // redraw t until no eigenvalue sits within zero_tol of it
    for (int attempt = 0; attempt < 20; ++attempt) {
      const double t = std::uniform_real_distribution<double>(-2.5, 12.0)(rng);
      r = montiel_ros_check(c.p, part, t, nullptr, {.zero_tol = kZeroTol});
      if (r.separated) break;
    }
    if (!r.separated) continue;
    ++configs;
    held += r.all_hold ? 1 : 0;
    std::vector<Counts> d, n;
    for (const auto& rec : r.pieces) {
      d.push_back(rec.dirichlet);
      n.push_back(rec.neumann);
    }
    bool swapped_ok = true;
    for (const auto& ch : check_counting_inequalities(r.parent, n, d))
      swapped_ok = swapped_ok && ch.lower_holds && ch.upper_holds;
    caught += swapped_ok ? 0 : 1;
  }
  o.detail << configs << " configurations, " << held << " hold, swap caught in " << caught << "; ";
  o.require(configs >= 10, "at least 10 separated configurations");
  o.require(held == configs, "inequalities hold");

  // deliberate mutation on the hemisphere split
  const ProblemSpec s = with_q(Domain::FullSphere, 3, 2.0);
  Partition halves;
  halves.pieces.resize(2);
  for (int t = 0; t < s.mesh.triangle_count(); ++t) {
    const auto& tri = s.mesh.triangles[t];
    const double z = s.mesh.vertices[tri[0]].z() + s.mesh.vertices[tri[1]].z() + s.mesh.vertices[tri[2]].z();
    halves.pieces[z > 0 ? 0 : 1].push_back(t);
  }
  const MontielRosReport r = montiel_ros_check(s, halves, 0.5, nullptr, {.zero_tol = kZeroTol});
  std::vector<Counts> d, n;
  for (const auto& rec : r.pieces) {
    d.push_back(rec.dirichlet);
    n.push_back(rec.neumann);
  }
  bool mutant_passes = true;
  for (const auto& ch : check_counting_inequalities(r.parent, n, d))
    mutant_passes = mutant_passes && ch.lower_holds && ch.upper_holds;
  o.detail << "hemisphere split holds=" << r.all_hold << " mutant caught=" << !mutant_passes;
  o.require(r.all_hold, "hemisphere split");
  o.require(!mutant_passes, "mutation caught");
}

void conformal(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  struct Base {
    std::string name;
    ProblemSpec p;
  };
  const std::vector<Base> bases = {{"disk", disk_problem(3)}, {"octant", with_q(Domain::SphereOctant, 3, 2.0)}};
  SolveOptions opts;
  opts.count = 3;
  for (const auto& b : bases) {
    const IndexNullity ref = index_nullity(solve_covering(b.p, kZeroTol, opts), kZeroTol);
    int same = 0;
    for (int trial = 0; trial < 5; ++trial) {
      const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng), c4 = coef(rng);
      std::vector<double> rho(b.p.vertex_count());
      for (int v = 0; v < b.p.vertex_count(); ++v) {
        const Vec3& x = b.p.mesh.vertices[v];
        rho[v] = std::exp(c1 * x.x() + c2 * x.y() + c3 * x.z() + c4 * std::sin(2.0 * x.x() * x.y()));
      }
      const ProblemSpec q = apply_conformal_change(b.p, rho);
      const IndexNullity in = index_nullity(solve_covering(q, kZeroTol, opts), kZeroTol);
      same += (in.index == ref.index && in.nullity == ref.nullity) ? 1 : 0;
    }
    o.detail << b.name << " (" << ref.index << "," << ref.nullity << ") kept " << same << "/5; ";
    o.require(same == 5, b.name);
  }
}

void excision(Outcome& o) {
  const SurfaceMesh base = build_builtin(Domain::UnitDisk, 6);
  const double l1 = solve(make_problem(base, 6), {.count = 1}).eigenvalues[0];
  std::vector<double> gaps;
  for (double delta : {0.1, 0.05, 0.025}) {
    const Excision ex = excise_disks(base, {Vec3::Zero()}, delta);
    const double ld = solve(make_problem(ex.mesh, 6), {.count = 1}).eigenvalues[0];
    gaps.push_back(ld - l1);
    o.detail << "d=" << delta << ": " << ld << " ";
    o.require(ld >= l1 - 1e-9, "monotonicity at delta " + std::to_string(delta));
  }
  o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gap decreases with delta");
}

void nodal(Outcome& o) {
  for (int level = 3; level <= 5; ++level) {
    const int n = k0_killing_nodal_domains(level, true).count;
    o.detail << "pair L" << level << "=" << n << " ";
    o.require(n == 8, "pair level " + std::to_string(level));
  }
  const int single = k0_killing_nodal_domains(4, false).count;
  o.detail << "K0=" << single;
  o.require(single == 4, "single annulus");
}

void ledger(Outcome& o) {
  const int a = glued_surface_ledger("antiprismatic", standard_block_rows("antiprismatic")).equivariant_bound;
  const GluedLedger y = glued_surface_ledger("pyramidal", standard_block_rows("pyramidal"));
  const GluedLedger p = glued_surface_ledger("prismatic", standard_block_rows("prismatic"));
  o.detail << a << ", " << y.equivariant_bound << ", " << p.equivariant_bound << "; " << y.absolute_bound.str() << ", "
           << p.absolute_bound.str();
  o.require(a == 2 && y.equivariant_bound == 6 && p.equivariant_bound == 2, "equivariant bounds");
  o.require(y.absolute_bound.str() == "12m+12" && p.absolute_bound.str() == "8n", "absolute bounds");
  for (int n = 2; n <= 10; ++n)
    o.require(symmetry_lower_bound(n, LowerBoundVariant::PrismEven) == 2 * n - 1, "2n-1 at n=" + std::to_string(n));
  for (int m = 1; m <= 9; ++m)
    o.require(symmetry_lower_bound(m + 1, LowerBoundVariant::Pyramidal) == 2 * m + 1, "2m+1 at m=" + std::to_string(m));
}

}  // namespace

int main() {
  const std::vector<std::function<void(Outcome&)>> criteria = {
      sphere_table, octant_and_lune, catenoid, disk, domain_reduction,
      montiel_ros, conformal,        excision, nodal, ledger};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    o.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    std::printf("criterion %zu: %s - %s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
