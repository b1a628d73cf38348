#include "equispec/reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace equispec {

namespace {

constexpr double kZeroTol = 0.05;

ReproduceRow row(std::string name, double computed, Relation rel, double reference, double tol = 0.0,
                 std::string detail = {}) {
  ReproduceRow r;
  r.name = std::move(name);
  r.computed = computed;
  r.reference = reference;
  r.tolerance = tol;
  r.relation = rel;
  r.detail = std::move(detail);
  switch (rel) {
    case Relation::Near: r.pass = std::abs(computed - reference) <= tol; break;
    case Relation::Less: r.pass = computed < reference; break;
    case Relation::Greater: r.pass = computed > reference; break;
    case Relation::Equal: r.pass = computed == reference; break;
  }
  return r;
}

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::Near: return "~";
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
    case Relation::Equal: return "=";
  }
  return "?";
}

// (ind, nul) from extrapolated values, or the finest level where a crossing
// suppressed extrapolation.
std::pair<int, int> study_index(const ConvergenceStudy& st, double zero_tol) {
  int ind = 0, nul = 0;
  for (const auto& r : st.rows) {
    const double l = r.crossing ? r.values.back() : r.extrapolated;
    if (l < -zero_tol) ++ind;
    else if (l <= zero_tol) ++nul;
  }
  return {ind, nul};
}

void sphere_table(ReproduceResult& out) {
  Json rows = Json::array();
  for (int r = 1; r <= 5; ++r) {
    const ConvergenceStudy st = convergence_study(sphere_table_problem(r, 3), 3, 4);
    const auto [ind, nul] = study_index(st, kZeroTol);
    const auto [pi, pn] = sphere_table_expected(r);
    const std::string label = sphere_table_label(r);
    out.rows.push_back(row(label + ": index", ind, Relation::Equal, pi));
    out.rows.push_back(row(label + ": nullity", nul, Relation::Equal, pn));
    std::vector<double> ex;
    for (const auto& cr : st.rows) ex.push_back(cr.extrapolated);
    rows.push_back(Json{{"row", r}, {"label", label}, {"extrapolated", ex}});
  }
  out.extra["rows"] = rows;
  out.extra["levels"] = {3, 4, 5};
}

void k0(ReproduceResult& out) {
  const SLSpectrum s = sl_solve(k0_mode_problem(0, false), 2);
  out.rows.push_back(row("mode-0 Neumann lambda_1", s.eigenvalues[0], Relation::Less, -0.1));
  out.rows.push_back(row("mode-0 Neumann lambda_2", s.eigenvalues[1], Relation::Greater, 0.1));
  const int k_min = k0_k_min(kZeroTol);
  out.extra["k_min"] = k_min;
  for (int k = k_min; k <= k_min + 6; ++k) {
    const K0EquivariantIndex e = k0_equivariant_index(k, kZeroTol);
    out.rows.push_back(row("Y_" + std::to_string(k) + " index", e.index, Relation::Equal, 1));
    out.rows.push_back(row("Y_" + std::to_string(k) + " nullity", e.nullity, Relation::Equal, 0));
  }
  if (k_min > 1) {
    const K0EquivariantIndex below = k0_equivariant_index(k_min - 1, kZeroTol);
    out.extra["below_k_min"] = Json{{"k", k_min - 1}, {"index", below.index}, {"nullity", below.nullity}};
  }
  const K0Certificate c = k0_certificate();
  out.rows.push_back(row("certificate left constant", c.left_constant, Relation::Near, 0.5962, 5e-4));
  out.rows.push_back(row("certificate right constant", c.right_constant, Relation::Near, 0.4443, 5e-4));
  out.rows.push_back(row("certificate intervals overlap", c.overlap ? 1 : 0, Relation::Equal, 1));
  out.rows.push_back(row("certificate Robin factor", c.robin_factor, Relation::Less, 0.0));
  out.extra["boundary_residual"] = c.boundary_residual;
  out.extra["certificate_lambda2"] = c.lambda2;
}

void disk(ReproduceResult& out) {
  SolveOptions opts;
  opts.count = 3;
  const ProblemSpec plain = disk_problem(4);
  const IndexNullity pin = index_nullity(solve_covering(plain, kZeroTol, opts), kZeroTol);
  out.rows.push_back(row("plain index", pin.index, Relation::Equal, 0));
  out.rows.push_back(row("plain nullity", pin.nullity, Relation::Equal, 1));
  for (int m = 1; m <= 3; ++m) {
    const int k = m + 1;
    const ProblemSpec p = disk_problem(3, 4 * k);
    const GroupAction g =
        with_twist(act_on_mesh(standard_group(GroupKind::Antiprismatic, k), p.mesh), TwistKind::NormalSign, &p.mesh);
    const IndexNullity in = index_nullity(solve_covering(p, kZeroTol, opts, &g), kZeroTol);
    const std::string tag = "A_" + std::to_string(k) + " ";
    out.rows.push_back(row(tag + "index", in.index, Relation::Equal, 0));
    out.rows.push_back(row(tag + "nullity", in.nullity, Relation::Equal, 0));
  }
  const ConvergenceStudy st = convergence_study(disk_problem(3), 3, 3);
  const double l2 = st.rows[1].extrapolated;
  out.rows.push_back(row("lambda_2 extrapolated", l2, Relation::Near, 3.390, 0.005 * 3.390));
  out.extra["lambda_2_levels"] = st.rows[1].values;
}

void nodal(ReproduceResult& out) {
  for (int level = 3; level <= 5; ++level)
    out.rows.push_back(row("-K0 u K0 level " + std::to_string(level), k0_killing_nodal_domains(level, true).count,
                           Relation::Equal, 8));
  out.rows.push_back(row("K0 level 4", k0_killing_nodal_domains(4, false).count, Relation::Equal, 4));
}

void ledger(ReproduceResult& out) {
  Json ledgers = Json::array();
  for (const auto& [recipe, expected] : {std::pair<std::string, int>{"antiprismatic", 2}, {"pyramidal", 6},
                                         {"prismatic", 2}}) {
    const GluedLedger l = glued_surface_ledger(recipe, standard_block_rows(recipe));
    out.rows.push_back(row(recipe + " equivariant bound", l.equivariant_bound, Relation::Equal, expected));
    ledgers.push_back(ledger_json(l));
    if (recipe == "pyramidal") {
      out.rows.push_back(row("pyramidal absolute bound, coefficient of m", l.absolute_bound.coefficient,
                             Relation::Equal, 12, 0, l.absolute_bound.str()));
      out.rows.push_back(row("pyramidal absolute bound, constant", l.absolute_bound.constant, Relation::Equal, 12, 0,
                             l.absolute_bound.str()));
    } else if (recipe == "prismatic") {
      out.rows.push_back(row("prismatic absolute bound, coefficient of n", l.absolute_bound.coefficient,
                             Relation::Equal, 8, 0, l.absolute_bound.str()));
      out.rows.push_back(row("prismatic absolute bound, constant", l.absolute_bound.constant, Relation::Equal, 0, 0,
                             l.absolute_bound.str()));
    }
  }
  out.extra["ledgers"] = ledgers;
  for (int n = 2; n <= 6; ++n)
    out.rows.push_back(row("even-part lower bound, n=" + std::to_string(n),
                           symmetry_lower_bound(n, LowerBoundVariant::PrismEven), Relation::Equal, 2 * n - 1, 0,
                           "2n-1"));
  for (int m = 1; m <= 5; ++m)
    out.rows.push_back(row("index lower bound, m=" + std::to_string(m),
                           symmetry_lower_bound(m + 1, LowerBoundVariant::Pyramidal), Relation::Equal, 2 * m + 1, 0,
                           "2m+1"));
}

}  // namespace

std::vector<std::string> reproduce_suites() { return {"sphere-table", "k0", "disk", "nodal", "ledger"}; }

NodalDomains k0_killing_nodal_domains(int level, bool pair) {
  const ProblemSpec p = k0_problem(level, 1, BoundaryTag::Neumann, {}, pair);
  return nodal_domains(p.mesh, killing_jacobi_field(p.mesh, Vec3::UnitX()));
}

ReproduceResult reproduce(const std::string& suite) {
  ReproduceResult out;
  out.suite = suite;
  out.extra = Json::object();
  if (suite == "sphere-table") sphere_table(out);
  else if (suite == "k0") k0(out);
  else if (suite == "disk") disk(out);
  else if (suite == "nodal") nodal(out);
  else if (suite == "ledger") ledger(out);
  else throw InvalidInput("unknown reproduce suite '" + suite + "'");
  for (const auto& r : out.rows) out.pass = out.pass && r.pass;
  return out;
}

Json reproduce_json(const ReproduceResult& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json j{{"name", x.name},
           {"computed", x.computed},
           {"reference", x.reference},
           {"relation", relation_symbol(x.relation)},
           {"tolerance", x.tolerance},
           {"pass", x.pass}};
    if (!x.detail.empty()) j["detail"] = x.detail;
    rows.push_back(j);
  }
  return Json{{"report", "reproduce"}, {"version", kReportVersion}, {"suite", r.suite},
              {"zero_tol", kZeroTol},  {"rows", rows},               {"extra", r.extra},
              {"pass", r.pass}};
}

std::string reproduce_table(const ReproduceResult& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-48s %14s %2s %10s %9s  %s\n", ("[" + r.suite + "]").c_str(), "computed", "",
                "reference", "tol", "status");
  out << line;
  for (const auto& x : r.rows) {
    std::snprintf(line, sizeof line, "%-48s %14.6g %2s %10.6g %9.2g  %s%s\n", x.name.c_str(), x.computed,
                  relation_symbol(x.relation), x.reference, x.tolerance, x.pass ? "pass" : "FAIL",
                  x.detail.empty() ? "" : ("  (" + x.detail + ")").c_str());
    out << line;
  }
  return out.str();
}

}  // namespace equispec
