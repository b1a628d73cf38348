#include <sstream>
#include <string>

#include "doctest.h"
#include "equispec/reports.hpp"

using namespace equispec;

namespace {

Spectrum octant_spectrum() {
  ProblemSpec p = make_problem(build_builtin(Domain::SphereOctant, 2), 2, "octant");
  set_potential_constant(p, 2.0);
  return solve(p, {.count = 3});
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("reports") {
  TEST_CASE("spectrum report fields") {
    const Spectrum s = octant_spectrum();
    const ReportContext ctx{0xabcdefull, 2, 0.05, "octant"};
    const Json j = spectrum_json(s, ctx);
    CHECK(j["report"] == "spectrum");
    CHECK(j["config_hash"] == "0000000000abcdef");
    CHECK(j["level"] == 2);
    CHECK(j["zero_tol"] == 0.05);
    CHECK(j["eigenvalues"].size() == 3);
    CHECK(j["index"] == 1);
    CHECK(j["nullity"] == 0);
    CHECK(j["subspace"]["kind"] == "plain");
    CHECK(j["solver"].contains("method"));
    // same input, same bytes
    CHECK(dump(j) == dump(spectrum_json(octant_spectrum(), ctx)));
    CHECK(dump(j).back() == '\n');
  }

  TEST_CASE("index is null when the spectrum stops short") {
    Spectrum s;
    s.eigenvalues = {-3.0, -1.0};
    s.residuals = {0.0, 0.0};
    const Json j = spectrum_json(s, {});
    CHECK(j["index"].is_null());
    CHECK(j["nullity"].is_null());
  }

  TEST_CASE("csv exports") {
    Spectrum s;
    s.eigenvalues = {-2.0, 0.01, 4.0};
    s.residuals = {1e-12, 1e-12, 1e-12};
    const std::string csv = spectrum_csv(s, 0.05);
    CHECK(csv.rfind("index,eigenvalue,residual,class\n", 0) == 0);
    CHECK(csv.find("1,-2,1e-12,negative\n") != std::string::npos);
    CHECK(csv.find(",zero\n") != std::string::npos);
    CHECK(csv.find("3,4,1e-12,positive\n") != std::string::npos);

    const SurfaceMesh disk = build_builtin(Domain::UnitDisk, 1);
    std::vector<double> x(disk.vertex_count());
    for (int v = 0; v < disk.vertex_count(); ++v) x[v] = disk.vertices[v].x();
    const NodalDomains nd = nodal_domains(disk, x);
    const std::string plot = eigenfunction_csv(disk, x, &nd);
    CHECK(plot.rfind("vertex,x,y,z,value,domain\n", 0) == 0);
    CHECK(lines(plot) == disk.vertex_count() + 1);
    CHECK(lines(eigenfunction_csv(disk, x)) == disk.vertex_count() + 1);
    CHECK_THROWS_AS(eigenfunction_csv(disk, {1.0}), InvalidInput);
  }

  TEST_CASE("ledger and convergence reports") {
    const Json l = ledger_json(glued_surface_ledger("prismatic", standard_block_rows("prismatic")));
    CHECK(l["equivariant_bound"] == 2);
    CHECK(l["absolute_bound"] == "8n");
    CHECK(l["rows"].size() == 2);
    const Json a = ledger_json(glued_surface_ledger("antiprismatic", standard_block_rows("antiprismatic")));
    CHECK(a["absolute_bound"].is_null());

    ConvergenceStudy st;
    st.levels = {1, 2, 3};
    st.rows.push_back(richardson({-1.9, -1.975, -1.99375}));
    st.rows.push_back(richardson({4.4, 4.1, 4.025}));
    const Json c = convergence_json(st, {1, 1, 0.05, "x"});
    CHECK(c["index"] == 1);
    CHECK(c["nullity"] == 0);
    CHECK(c["rows"][1]["extrapolated"].get<double>() == doctest::Approx(4.0));
  }
}
