#include <cmath>

#include "doctest.h"
#include "equispec/problem.hpp"

using namespace equispec;

TEST_SUITE("problem") {
  TEST_CASE("identity conformal factor changes nothing") {
    ProblemSpec p = make_problem(build_builtin(Domain::UnitDisk, 2), 2);
    set_potential(p, [](const Vec3& v) { return 1.0 + v.x(); });
    const ProblemSpec q = apply_conformal_change(p, std::vector<double>(p.vertex_count(), 1.0));
    for (int t = 0; t < p.mesh.triangle_count(); ++t)
      CHECK((induced_metric(q.mesh, t) - induced_metric(p.mesh, t)).norm() < 1e-15);
    for (int v = 0; v < p.vertex_count(); ++v) {
      CHECK(q.potential[v] == p.potential[v]);
      CHECK(q.robin[v] == p.robin[v]);
    }
  }

  TEST_CASE("constant conformal factor scales metric, potential and Robin term") {
    ProblemSpec p = make_problem(build_builtin(Domain::UnitDisk, 1), 1);
    set_potential_constant(p, 3.0);
    set_robin_constant(p, 5.0);
    const ProblemSpec q = apply_conformal_change(p, std::vector<double>(p.vertex_count(), 2.0));
    for (int t = 0; t < p.mesh.triangle_count(); ++t)
      CHECK((induced_metric(q.mesh, t) - 4.0 * induced_metric(p.mesh, t)).norm() < 1e-14);
    for (int v = 0; v < p.vertex_count(); ++v) {
      CHECK(q.potential[v] == doctest::Approx(0.75));
      CHECK(q.robin[v] == doctest::Approx(2.5));
    }
    CHECK(total_area(q.mesh) == doctest::Approx(4.0 * total_area(p.mesh)));
  }

  TEST_CASE("conformal change is undone by the reciprocal factor") {
    ProblemSpec p = make_problem(build_builtin(Domain::SphereOctant, 2), 2);
    set_potential_constant(p, 2.0);
    std::vector<double> rho(p.vertex_count()), inv(p.vertex_count());
    for (int v = 0; v < p.vertex_count(); ++v) {
      rho[v] = 1.0 + 0.3 * std::sin(3.0 * p.mesh.vertices[v].x());
      inv[v] = 1.0 / rho[v];
    }
    const ProblemSpec back = apply_conformal_change(apply_conformal_change(p, rho), inv);
    for (int t = 0; t < p.mesh.triangle_count(); ++t)
      CHECK((induced_metric(back.mesh, t) - induced_metric(p.mesh, t)).norm() < 1e-14);
    for (int v = 0; v < p.vertex_count(); ++v) CHECK(back.potential[v] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(apply_conformal_change(p, std::vector<double>(p.vertex_count(), -1.0)), InvalidInput);
  }

  TEST_CASE("Jacobi potentials") {
    Chart sphere{Chart::Kind::Sphere};
    CHECK(jacobi_potential(sphere)(Vec3(0, 0, 1)) == 2.0);
    Chart cat{Chart::Kind::Catenoid, kCatenoidA, kCatenoidH, kCatenoidS};
    const double z = 0.3, c = std::cosh(kCatenoidA * z - kCatenoidS);
    const double expected = (kCatenoidA * kCatenoidA + 1.0 / (kCatenoidA * kCatenoidA)) / std::pow(c, 4);
    CHECK(jacobi_potential(cat)(Vec3(0.5, 0, z)) == doctest::Approx(expected).epsilon(1e-14));
    Chart pair = cat;
    pair.kind = Chart::Kind::CatenoidPair;
    CHECK(jacobi_potential(pair)(Vec3(0.5, 0, -z)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(jacobi_potential(Chart{Chart::Kind::Disk})(Vec3::Zero()) == 0.0);
  }

  TEST_CASE("Robin top tags only the sphere-contact circle") {
    ProblemSpec p = make_problem(build_builtin(Domain::CatenoidK0, 1), 1);
    const int n = tag_robin_top(p);
    CHECK(n > 0);
    for (const auto& e : p.mesh.boundary_edges) {
      const bool top = std::abs(p.mesh.vertices[e.v[0]].z() - kCatenoidH) < 1e-9;
      CHECK((e.tag == BoundaryTag::Robin) == top);
    }
    ProblemSpec d = make_problem(build_builtin(Domain::UnitDisk, 0));
    CHECK_THROWS_AS(tag_robin_top(d), InvalidInput);
  }

  TEST_CASE("refinement resamples analytic coefficients") {
    ProblemSpec p = make_problem(build_builtin(Domain::SphereOctant, 1), 1);
    set_potential(p, [](const Vec3& v) { return v.z() * v.z(); });
    const ProblemSpec r = refine_problem(p);
    CHECK(r.level == 2);
    for (int v = 0; v < r.vertex_count(); ++v)
      CHECK(r.potential[v] == doctest::Approx(r.mesh.vertices[v].z() * r.mesh.vertices[v].z()));
  }

  TEST_CASE("problem hash is stable and sensitive") {
    ProblemSpec a = make_problem(build_builtin(Domain::SphereOctant, 2), 2);
    ProblemSpec b = make_problem(build_builtin(Domain::SphereOctant, 2), 2);
    set_potential_constant(a, 2.0);
    set_potential_constant(b, 2.0);
    CHECK(problem_hash(a) == problem_hash(b));
    set_potential_constant(b, 2.0 + 1e-12);
    CHECK(problem_hash(a) != problem_hash(b));
  }
}
