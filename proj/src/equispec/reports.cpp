#include "equispec/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace equispec {

namespace {

Json header(const std::string& kind, const ReportContext& ctx) {
  return Json{{"report", kind},
              {"version", kReportVersion},
              {"config_hash", hex64(ctx.config_hash)},
              {"level", ctx.level},
              {"zero_tol", ctx.zero_tol},
              {"problem", ctx.problem}};
}

Json counts_json(const Counts& c) { return Json{{"below", c.below}, {"at_or_below", c.at_or_below}}; }

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json spectrum_json(const Spectrum& s, const ReportContext& ctx) {
  Json j = header("spectrum", ctx);
  j["eigenvalues"] = s.eigenvalues;
  j["residuals"] = s.residuals;
  j["solver"] = Json{{"method", s.method},       {"shift", s.shift},   {"trace_constant", s.trace_constant},
                     {"iterations", s.iterations}, {"seed", hex64(s.seed)}, {"dimension", s.dimension},
                     {"complete", s.complete}};
  Json sub{{"kind", s.subspace}};
  if (!s.group.empty()) {
    sub["group"] = s.group;
    sub["twist"] = s.twist;
  }
  j["subspace"] = sub;
  try {
    const IndexNullity in = index_nullity(s, ctx.zero_tol);
    j["index"] = in.index;
    j["nullity"] = in.nullity;
    j["margin"] = in.margin;
  } catch (const InsufficientSpectrum&) {
    // Not enough eigenvalues to certify; say so instead of guessing.
    j["index"] = nullptr;
    j["nullity"] = nullptr;
    j["margin"] = nullptr;
  }
  return j;
}

Json montiel_ros_json(const MontielRosReport& r, const ReportContext& ctx) {
  Json j = header("montiel_ros", ctx);
  j["t"] = r.t;
  j["group"] = r.group.empty() ? Json(nullptr) : Json(r.group);
  j["parent"] = Json{{"eigenvalues", r.parent_eigenvalues}, {"counts", counts_json(r.parent)}};
  Json pieces = Json::array();
  for (size_t i = 0; i < r.pieces.size(); ++i) {
    const auto& p = r.pieces[i];
    pieces.push_back(Json{{"piece", i},
                          {"triangles", p.triangles},
                          {"dirichlet", Json{{"eigenvalues", p.dirichlet_eigenvalues}, {"counts", counts_json(p.dirichlet)}}},
                          {"neumann", Json{{"eigenvalues", p.neumann_eigenvalues}, {"counts", counts_json(p.neumann)}}}});
  }
  j["pieces"] = pieces;
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"distinguished", c.distinguished},
                          {"lower", Json{{"lhs", c.lower_lhs}, {"rhs", c.lower_rhs}, {"holds", c.lower_holds}}},
                          {"upper", Json{{"lhs", c.upper_lhs}, {"rhs", c.upper_rhs}, {"holds", c.upper_holds}}}});
  j["checks"] = checks;
  j["separated"] = r.separated;
  j["all_hold"] = r.all_hold;
  return j;
}

Json convergence_json(const ConvergenceStudy& study, const ReportContext& ctx) {
  Json j = header("convergence", ctx);
  j["levels"] = study.levels;
  j["mesh_sizes"] = study.mesh_sizes;
  Json rows = Json::array();
  std::vector<double> extrapolated;
  for (const auto& r : study.rows) {
    rows.push_back(Json{{"index", r.index},
                        {"values", r.values},
                        {"extrapolated", r.extrapolated},
                        {"order", r.order},
                        {"order_assumed", r.order_assumed},
                        {"error_bar", r.error_bar},
                        {"crossing", r.crossing},
                        {"overlap", r.overlap}});
    extrapolated.push_back(r.extrapolated);
  }
  j["rows"] = rows;
  // index / nullity from the extrapolated values, when they cover zero_tol
  int ind = 0, nul = 0;
  for (double l : extrapolated) {
    if (l < -ctx.zero_tol) ++ind;
    else if (l <= ctx.zero_tol) ++nul;
  }
  const bool covered = !extrapolated.empty() && extrapolated.back() > ctx.zero_tol;
  j["index"] = covered ? Json(ind) : Json(nullptr);
  j["nullity"] = covered ? Json(nul) : Json(nullptr);
  return j;
}

Json ledger_json(const GluedLedger& l) {
  Json rows = Json::array();
  for (size_t i = 0; i < l.rows.size(); ++i) {
    const auto& r = l.rows[i];
    rows.push_back(Json{{"block", r.block},
                        {"multiplicity", r.multiplicity},
                        {"ind", r.ind},
                        {"nul", r.nul},
                        {"distinguished", r.distinguished},
                        {"term", l.terms[i]}});
  }
  Json j{{"report", "ledger"}, {"version", kReportVersion}, {"recipe", l.recipe}, {"rows", rows},
         {"equivariant_bound", l.equivariant_bound}};
  if (l.piece_count.coefficient != 0 || l.piece_count.constant != 0) {
    j["piece_count"] = l.piece_count.str();
    j["absolute_bound"] = l.absolute_bound.str();
  } else {
    j["piece_count"] = nullptr;
    j["absolute_bound"] = nullptr;
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string spectrum_csv(const Spectrum& s, double zero_tol) {
  std::ostringstream out;
  out << "index,eigenvalue,residual,class\n";
  for (int i = 0; i < s.size(); ++i) {
    const double l = s.eigenvalues[i];
    const char* cls = l < -zero_tol ? "negative" : (l <= zero_tol ? "zero" : "positive");
    out << i + 1 << ',' << num(l) << ',' << num(i < static_cast<int>(s.residuals.size()) ? s.residuals[i] : NAN)
        << ',' << cls << '\n';
  }
  return out.str();
}

std::string eigenfunction_csv(const SurfaceMesh& mesh, const std::vector<double>& values, const NodalDomains* nodal) {
  if (static_cast<int>(values.size()) != mesh.vertex_count()) throw InvalidInput("expected one value per vertex");
  std::vector<int> label(mesh.vertex_count(), -1);
  if (nodal)
    for (int t = 0; t < mesh.triangle_count(); ++t)
      if (nodal->labels[t] >= 0)
        for (int v : mesh.triangles[t])
          if (label[v] < 0) label[v] = nodal->labels[t];
  std::ostringstream out;
  out << "vertex,x,y,z,value" << (nodal ? ",domain" : "") << '\n';
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Vec3& p = mesh.vertices[v];
    out << v << ',' << num(p.x()) << ',' << num(p.y()) << ',' << num(p.z()) << ',' << num(values[v]);
    if (nodal) out << ',' << label[v];
    out << '\n';
  }
  return out.str();
}

}  // namespace equispec
