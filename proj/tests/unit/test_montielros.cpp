#include <cmath>
#include <numbers>

#include "doctest.h"
#include "equispec/montielros.hpp"

using namespace equispec;

namespace {

ProblemSpec unit_sphere(int level, Params params = {}) {
  ProblemSpec p = make_problem(build_builtin(Domain::FullSphere, level, params), level);
  set_potential_constant(p, 2.0);
  return p;
}

Partition split_by_height(const SurfaceMesh& m) {
  Partition part;
  part.pieces.resize(2);
  for (int t = 0; t < m.triangle_count(); ++t) {
    const double z = (m.vertices[m.triangles[t][0]] + m.vertices[m.triangles[t][1]] + m.vertices[m.triangles[t][2]]).z();
    part.pieces[z > 0 ? 0 : 1].push_back(t);
  }
  return part;
}

}  // namespace

TEST_SUITE("montielros") {
  TEST_CASE("hemisphere split at t = 0") {
    const ProblemSpec p = unit_sphere(3);
    const MontielRosReport r = montiel_ros_check(p, split_by_height(p.mesh), 0.0, nullptr);
    CHECK(r.parent.below == 1);
    CHECK(r.parent.at_or_below == 4);
    REQUIRE(r.pieces.size() == 2);
    for (const auto& piece : r.pieces) {
      CHECK(piece.dirichlet.below == 0);
      CHECK(piece.dirichlet.at_or_below == 1);
      CHECK(piece.neumann.below == 1);
      CHECK(piece.neumann.at_or_below == 3);
    }
    CHECK(!r.separated);
    CHECK(r.all_hold);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].lower_rhs == 1);
    CHECK(r.checks[0].upper_rhs == 4);

    MontielRosOptions strict;
    strict.require_separation = true;
    CHECK_THROWS_AS(montiel_ros_check(p, split_by_height(p.mesh), 0.0, nullptr, strict), InvalidInput);
  }

  TEST_CASE("threshold below the spectrum and a single piece") {
    const ProblemSpec p = unit_sphere(2);
    const MontielRosReport low = montiel_ros_check(p, split_by_height(p.mesh), -10.0, nullptr);
    CHECK(low.parent.at_or_below == 0);
    for (const auto& c : low.checks) CHECK((c.lower_lhs == 0 && c.upper_rhs == 0));
    CHECK(low.all_hold);
    CHECK(low.separated);

    Partition whole;
    whole.pieces.emplace_back();
    for (int t = 0; t < p.mesh.triangle_count(); ++t) whole.pieces[0].push_back(t);
    const MontielRosReport one = montiel_ros_check(p, whole, 1.0, nullptr);
    CHECK(one.all_hold);
    CHECK(one.pieces[0].dirichlet.at_or_below == one.parent.at_or_below);
  }

  TEST_CASE("invalid partitions") {
    const ProblemSpec p = unit_sphere(1);
    Partition part = split_by_height(p.mesh);
    Partition missing = part;
    missing.pieces[0].pop_back();
    CHECK_THROWS_AS(validate_partition(p.mesh, missing), InvalidInput);
    Partition twice = part;
    twice.pieces[1].push_back(part.pieces[0][0]);
    CHECK_THROWS_AS(validate_partition(p.mesh, twice), InvalidInput);
    Partition empty = part;
    empty.pieces.emplace_back();
    CHECK_THROWS_AS(validate_partition(p.mesh, empty), InvalidInput);
    Partition outside = part;
    outside.pieces[0].push_back(p.mesh.triangle_count());
    CHECK_THROWS_AS(validate_partition(p.mesh, outside), InvalidInput);
    CHECK_THROWS_AS(validate_partition(p.mesh, Partition{}), InvalidInput);
  }

  TEST_CASE("inequality arithmetic") {
    const Counts parent{1, 4};
    const std::vector<Counts> d = {{0, 1}, {0, 1}}, n = {{1, 3}, {1, 3}};
    for (const auto& c : check_counting_inequalities(parent, d, n)) {
      CHECK(c.lower_holds);
      CHECK(c.upper_holds);
    }
    // exchanging the Dirichlet and Neumann data breaks the lower inequality
    for (const auto& c : check_counting_inequalities(parent, n, d)) CHECK(!c.lower_holds);
    CHECK_THROWS_AS(check_counting_inequalities(parent, d, {n[0]}), InvalidInput);

    const Counts c = count_eigenvalues({-2.0, -0.01, 0.0, 0.04, 0.3}, 0.0, 0.05);
    CHECK(c.below == 1);
    CHECK(c.at_or_below == 4);
  }

  TEST_CASE("isometric pieces and lower bounds") {
    const BoundLedger b = isometric_pieces_bounds({1, 0, 1, 2}, 3);
    CHECK(b.lower == 3);
    CHECK(b.upper == 5);
    CHECK(b.slack == 2);
    CHECK(b.consistent);
    const BoundLedger bad = isometric_pieces_bounds({2, 1, 1, 0}, 2);
    CHECK(bad.lower == 5);
    CHECK(!bad.consistent);
    CHECK_THROWS_AS(isometric_pieces_bounds({1, 0, 1, 0}, 0), InvalidInput);

    CHECK(symmetry_lower_bound(2, LowerBoundVariant::PlaneOdd) == 1);
    CHECK(symmetry_lower_bound(4, LowerBoundVariant::PrismEven) == 7);
    CHECK(symmetry_lower_bound(3, LowerBoundVariant::Pyramidal) == 5);
    CHECK_THROWS_AS(symmetry_lower_bound(1, LowerBoundVariant::Pyramidal), InvalidInput);
    CHECK(lower_bound_variant_from_name("plane_odd") == LowerBoundVariant::PlaneOdd);
  }

  TEST_CASE("glued surface ledgers") {
    const GluedLedger a = glued_surface_ledger("antiprismatic", standard_block_rows("antiprismatic"));
    CHECK(a.equivariant_bound == 2);
    const GluedLedger y = glued_surface_ledger("pyramidal", standard_block_rows("pyramidal"));
    CHECK(y.equivariant_bound == 6);
    CHECK(y.absolute_bound.str() == "12m+12");
    CHECK(y.absolute_bound.at(3) == 48);
    const GluedLedger p = glued_surface_ledger("prismatic", standard_block_rows("prismatic"));
    CHECK(p.equivariant_bound == 2);
    CHECK(p.absolute_bound.str() == "8n");

    auto rows = standard_block_rows("prismatic");
    rows[0].distinguished = true;
    CHECK_THROWS_AS(glued_surface_ledger("prismatic", rows), InvalidInput);
    CHECK_THROWS_AS(glued_surface_ledger("prismatic", {rows[1]}), InvalidInput);
    CHECK_THROWS_AS(standard_block_rows("cubic"), InvalidInput);
  }

  TEST_CASE("equivariant check and extension by zero") {
    const double pi = std::numbers::pi;
    const ProblemSpec p = unit_sphere(2, {{"k", 2}, {"theta0", pi / 4}});
    const GroupAction y2 = standard_group(GroupKind::Pyramidal, 2);
    const MontielRosReport r = montiel_ros_check(p, split_by_height(p.mesh), 1.0, &y2);
    CHECK(r.group == "pyramidal:2");
    CHECK(r.all_hold);

    Submesh sub;
    const ProblemSpec upper = internalize(p, split_by_height(p.mesh).pieces[0], BoundaryTag::Dirichlet, &sub);
    const Spectrum s = solve(upper, {.count = 1});
    const double q = extension_by_zero_rayleigh(p, sub, s.eigenfunctions.col(0));
    CHECK(q == doctest::Approx(s.eigenvalues[0]).epsilon(1e-9));

    // a piece that is not invariant is refused
    Partition halves;
    halves.pieces.resize(2);
    for (int t = 0; t < p.mesh.triangle_count(); ++t) {
      const auto& tri = p.mesh.triangles[t];
      const double x = (p.mesh.vertices[tri[0]] + p.mesh.vertices[tri[1]] + p.mesh.vertices[tri[2]]).x();
      halves.pieces[x > 0 ? 0 : 1].push_back(t);
    }
    CHECK_THROWS_AS(montiel_ros_check(p, halves, 1.0, &y2), InvalidInput);
  }
}
