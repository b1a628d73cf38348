#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "equispec/models.hpp"
#include "oracles.hpp"

using namespace equispec;

TEST_SUITE("models") {
  TEST_CASE("catenoid profile") {
    const CatenoidParams c;
    const K0Profile neck = k0_profile(c.s / c.a);
    CHECK(neck.r == doctest::Approx(1.0 / c.a).epsilon(1e-14));
    CHECK(std::abs(neck.dr) < 1e-14);
    CHECK(neck.A2 == doctest::Approx(c.a * c.a + 1.0 / (c.a * c.a)).epsilon(1e-14));
    // the annulus starts near the unit circle and ends on the unit sphere
    CHECK(std::abs(k0_profile(0.0).r - 1.0) < 5e-3);
    const double rh = k0_profile(c.h).r;
    CHECK(std::abs(rh * rh + c.h * c.h - 1.0) < 5e-4);
    CHECK_THROWS_AS(k0_profile(0.1, {-1.0, 0.8, 1.0}), InvalidInput);
  }

  TEST_CASE("Sturm-Liouville solver on constant coefficients") {
    SturmLiouville sl;
    sl.length = std::numbers::pi;
    const SLSpectrum n = sl_solve(sl, 4);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(n.eigenvalues[j] - j * j) < 1e-5 * (1 + j * j));
    sl.left_dirichlet = sl.right_dirichlet = true;
    const SLSpectrum d = sl_solve(sl, 3);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(d.eigenvalues[j] - (j + 1) * (j + 1)) < 1e-5 * (j + 1) * (j + 1));
    CHECK(d.grid.size() == static_cast<size_t>(sl.intervals + 1));
    CHECK(std::abs(d.functions(0, 0)) == 0.0);
  }

  TEST_CASE("mode-0 spectra of K0") {
    const SLSpectrum n = sl_solve(k0_mode_problem(0, false), 2);
    CHECK(n.eigenvalues[0] < -0.1);
    CHECK(n.eigenvalues[1] > 0.1);
    // Dirichlet at the equator raises everything
    const SLSpectrum d = sl_solve(k0_mode_problem(0, true), 2);
    CHECK(d.eigenvalues[0] > n.eigenvalues[0]);
    CHECK(d.eigenvalues[1] > n.eigenvalues[1]);
    // ground state keeps one sign
    const Eigen::VectorXd f = n.functions.col(0);
    CHECK((f.minCoeff() > 0 || f.maxCoeff() < 0));
  }

  TEST_CASE("higher modes") {
    double prev = -1e300;
    for (int ell = 0; ell <= 5; ++ell) {
      const double l = sl_solve(k0_mode_problem(ell, false), 1).eigenvalues[0];
      CHECK(l > prev);
      prev = l;
    }
    const int k_min = k0_k_min(0.05);
    CHECK(sl_solve(k0_mode_problem(k_min, false), 1).eigenvalues[0] > 0.05);
    if (k_min > 1) CHECK(sl_solve(k0_mode_problem(k_min - 1, false), 1).eigenvalues[0] <= 0.05);
    for (int k = k_min; k < k_min + 4; ++k) {
      const K0EquivariantIndex e = k0_equivariant_index(k, 0.05);
      CHECK(e.index == 1);
      CHECK(e.nullity == 0);
    }
  }

  TEST_CASE("angular multiplicities") {
    const GroupAction y3 = standard_group(GroupKind::Pyramidal, 3);
    CHECK(mode_multiplicity(y3, 0) == 1);
    CHECK(mode_multiplicity(y3, 1) == 0);
    CHECK(mode_multiplicity(y3, 3) == 1);
    CHECK(mode_multiplicity(y3, 6) == 1);
    const GroupAction det = with_twist(y3, TwistKind::Determinant);
    CHECK(mode_multiplicity(det, 0) == 0);
    CHECK(mode_multiplicity(det, 3) == 1);
    CHECK_THROWS_AS(mode_multiplicity(standard_group(GroupKind::Prismatic, 3), 1), InvalidInput);
  }

  TEST_CASE("disk radial problem matches Bessel zeros") {
    const double j = oracle::bessel_j1_prime_root();
    const double l = sl_solve(disk_mode_problem(1), 1).eigenvalues[0];
    CHECK(std::abs(l - j * j) < 1e-3 * j * j);
    CHECK(std::abs(sl_solve(disk_mode_problem(0), 1).eigenvalues[0]) < 1e-9);
  }

  TEST_CASE("sphere table rows") {
    CHECK(sphere_table_expected(3) == std::pair{1, 1});
    CHECK_THROWS_AS(sphere_table_problem(6, 1), InvalidInput);
    // moving the Dirichlet part interpolates between the Neumann and the
    // fully Dirichlet lune
    auto first = [](int row) { return solve(sphere_table_problem(row, 3, 0.3), {.count = 2}).eigenvalues; };
    const auto r3 = first(3), r4 = first(4), r5 = first(5);
    CHECK(r3[0] < r5[0]);
    CHECK(r5[0] < r4[0]);
    CHECK(r5[1] < r4[1]);
  }

  TEST_CASE("Killing fields") {
    const CatenoidParams c;
    const ProblemSpec p = k0_problem(4, 1);
    const auto kx = killing_jacobi_field(p.mesh, Vec3::UnitX());
    // against the analytic normal (cos t, sin t, -r'(z)) / cosh(a z - s)
    double worst = 0.0, peak = 0.0;
    for (int v = 0; v < p.vertex_count(); ++v) {
      const Vec3 x = p.mesh.vertices[v];
      const double t = std::atan2(x.y(), x.x());
      const Vec3 nu = Vec3(std::cos(t), std::sin(t), -std::sinh(c.a * x.z() - c.s)) / std::cosh(c.a * x.z() - c.s);
      const double exact = Vec3::UnitX().cross(x).dot(nu);
      worst = std::max(worst, std::abs(std::abs(kx[v]) - std::abs(exact)));
      peak = std::max(peak, std::abs(exact));
    }
    CHECK(worst < 0.05 * peak);
    // rotation about the symmetry axis is tangential
    const auto kz = killing_jacobi_field(p.mesh, Vec3::UnitZ());
    for (double v : kz) CHECK(std::abs(v) < 1e-3);
    CHECK_THROWS_AS(killing_jacobi_field(p.mesh, Vec3::Zero()), InvalidInput);
  }

  TEST_CASE("nodal domains") {
    const SurfaceMesh disk = build_builtin(Domain::UnitDisk, 2);
    CHECK(nodal_domains(disk, std::vector<double>(disk.vertex_count(), 1.0)).count == 1);
    std::vector<double> x(disk.vertex_count()), xy(disk.vertex_count());
    for (int v = 0; v < disk.vertex_count(); ++v) {
      x[v] = disk.vertices[v].x();
      xy[v] = disk.vertices[v].x() * disk.vertices[v].y();
    }
    CHECK(nodal_domains(disk, x).count == 2);
    const NodalDomains four = nodal_domains(disk, xy);
    CHECK(four.count == 4);
    CHECK(four.signs.size() == 4u);
    CHECK_THROWS_AS(nodal_domains(disk, std::vector<double>(disk.vertex_count(), 0.0)), InvalidInput);
  }

  TEST_CASE("certificate constants") {
    for (double scale : {0.9, 1.0, 1.1}) {
      CatenoidParams c;
      c.a *= scale;
      const K0Certificate cert = k0_certificate(c);
      const double A = c.a * c.a + 1.0 / (c.a * c.a);
      CHECK(cert.left_constant == doctest::Approx(std::sqrt(2.0 / A)).epsilon(1e-14));
      const double d = oracle::robin_threshold(A, std::cosh(c.a * c.h - c.s));
      CHECK(cert.right_constant == doctest::Approx(c.h - d).epsilon(1e-12));
    }
    const K0Certificate cert = k0_certificate();
    CHECK(cert.overlap);
    CHECK(cert.robin_factor < 0);
    CHECK(cert.lambda2_positive);
  }
}
