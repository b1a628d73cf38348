#include <cmath>
#include <map>

#include "doctest.h"
#include "equispec/assembly.hpp"

using namespace equispec;

TEST_SUITE("assembly") {
  TEST_CASE("Neumann Laplacian annihilates constants") {
    const ProblemSpec p = make_problem(build_builtin(Domain::UnitDisk, 3), 3);
    const Assembly a = assemble(p);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.size());
    CHECK((a.K * ones).cwiseAbs().maxCoeff() < 1e-12);
    // consistent mass integrates 1 to the area
    CHECK(ones.dot(a.M * ones) == doctest::Approx(total_area(p.mesh)).epsilon(1e-13));
  }

  TEST_CASE("constant test function on the octant gives -2 at every level") {
    for (int level = 0; level <= 4; ++level) {
      ProblemSpec p = make_problem(build_builtin(Domain::SphereOctant, level), level);
      set_potential_constant(p, 2.0);
      CHECK(rayleigh(assemble(p), std::vector<double>(p.vertex_count(), 1.0)) ==
            doctest::Approx(-2.0).epsilon(1e-13));
    }
  }

  TEST_CASE("Robin term is the boundary P1 mass") {
    ProblemSpec robin = make_problem(build_builtin(Domain::CatenoidK0, 1), 1);
    ProblemSpec plain = robin;
    tag_robin_top(robin);
    set_robin_constant(plain, 1.0);
    SparseMatrix Kr, Mr, Kn, Mn;
    assemble_full(robin, Kr, Mr);
    assemble_full(plain, Kn, Mn);
    // -sum over Robin edges of (L/6) [2 1; 1 2] with r = 1
    std::map<std::pair<int, int>, double> expected;
    for (const auto& e : robin.mesh.boundary_edges) {
      if (e.tag != BoundaryTag::Robin) continue;
      const int i = e.v[0], j = e.v[1];
      const double len = (robin.mesh.vertices[i] - robin.mesh.vertices[j]).norm();
      expected[{i, i}] -= 2.0 * len / 6.0;
      expected[{j, j}] -= 2.0 * len / 6.0;
      expected[{i, j}] -= len / 6.0;
      expected[{j, i}] -= len / 6.0;
    }
    const Eigen::MatrixXd diff = Eigen::MatrixXd(Kr) - Eigen::MatrixXd(Kn);
    double worst = 0.0;
    for (int i = 0; i < diff.rows(); ++i)
      for (int j = 0; j < diff.cols(); ++j) {
        auto it = expected.find({i, j});
        worst = std::max(worst, std::abs(diff(i, j) - (it == expected.end() ? 0.0 : it->second)));
      }
    CHECK(worst < 1e-14);
    CHECK((Eigen::MatrixXd(Mr) - Eigen::MatrixXd(Mn)).norm() == 0.0);
  }

  TEST_CASE("coordinate z is a negative direction on K0") {
    ProblemSpec p = make_problem(build_builtin(Domain::CatenoidK0, 3), 3);
    set_potential(p, jacobi_potential(*p.mesh.chart));
    tag_robin_top(p);
    tag_boundary(p, [](const Vec3& m) { return std::abs(m.z()) < 1e-9; }, BoundaryTag::Dirichlet);
    std::vector<double> z(p.vertex_count());
    for (int v = 0; v < p.vertex_count(); ++v) z[v] = p.mesh.vertices[v].z();
    CHECK(rayleigh(assemble(p), z) < 0.0);
  }

  TEST_CASE("Rayleigh quotient input checks") {
    ProblemSpec p = make_problem(build_builtin(Domain::UnitDisk, 1), 1);
    tag_boundary(p, [](const Vec3&) { return true; }, BoundaryTag::Dirichlet);
    const Assembly a = assemble(p);
    CHECK_THROWS_AS(rayleigh(a, std::vector<double>(p.vertex_count(), 1.0)), InvalidInput);
    CHECK_THROWS_AS(rayleigh(a, std::vector<double>(p.vertex_count(), 0.0)), InvalidInput);
    CHECK(a.size() < p.vertex_count());
  }

  TEST_CASE("shift makes the operator positive definite") {
    ProblemSpec p = make_problem(build_builtin(Domain::CatenoidK0, 2), 2);
    set_potential(p, jacobi_potential(*p.mesh.chart));
    tag_robin_top(p);
    const Assembly a = assemble(p);
    const Eigen::MatrixXd S = Eigen::MatrixXd(a.K) + a.shift * Eigen::MatrixXd(a.M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(a.trace_constant > 0.0);
  }
}
