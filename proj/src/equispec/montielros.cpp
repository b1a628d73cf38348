#include "equispec/montielros.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "equispec/parallel.hpp"

namespace equispec {

void validate_partition(const SurfaceMesh& mesh, const Partition& partition) {
  if (partition.pieces.empty()) throw InvalidInput("partition has no pieces");
  std::vector<int> owner(mesh.triangles.size(), -1);
  for (size_t i = 0; i < partition.pieces.size(); ++i) {
    if (partition.pieces[i].empty()) throw InvalidInput("partition piece " + std::to_string(i) + " is empty");
    for (int t : partition.pieces[i]) {
      if (t < 0 || t >= mesh.triangle_count())
        throw InvalidInput("partition references missing triangle " + std::to_string(t));
      if (owner[t] >= 0) throw InvalidInput("triangle " + std::to_string(t) + " belongs to two pieces");
      owner[t] = static_cast<int>(i);
    }
  }
  for (size_t t = 0; t < owner.size(); ++t)
    if (owner[t] < 0) throw InvalidInput("partition does not cover triangle " + std::to_string(t));
}

ProblemSpec internalize(const ProblemSpec& p, const std::vector<int>& piece, BoundaryTag mode, Submesh* detail) {
  if (mode == BoundaryTag::Robin) throw InvalidInput("internalization mode must be D or N");
  Submesh sub = extract_submesh(p.mesh, piece, mode);
  validate(sub.mesh);
  ProblemSpec out = make_problem(sub.mesh, p.level, p.name + (mode == BoundaryTag::Dirichlet ? "/D" : "/N"));
  for (int v = 0; v < out.vertex_count(); ++v) {
    out.potential[v] = p.potential[sub.vertex_to_parent[v]];
    out.robin[v] = p.robin[sub.vertex_to_parent[v]];
  }
  out.potential_source = p.potential_source;
  out.robin_source = p.robin_source;
  if (detail) *detail = std::move(sub);
  return out;
}

Counts count_eigenvalues(const std::vector<double>& eigenvalues, double t, double zero_tol) {
  Counts c;
  for (double l : eigenvalues) {
    if (l < t - zero_tol) ++c.below;
    if (l <= t + zero_tol) ++c.at_or_below;
  }
  return c;
}

std::vector<InequalityCheck> check_counting_inequalities(const Counts& parent, const std::vector<Counts>& dirichlet,
                                                         const std::vector<Counts>& neumann) {
  if (dirichlet.size() != neumann.size()) throw InvalidInput("D and N count lists differ in length");
  std::vector<InequalityCheck> out;
  for (size_t d = 0; d < dirichlet.size(); ++d) {
    InequalityCheck c;
    c.distinguished = static_cast<int>(d);
    c.lower_lhs = parent.below;
    c.upper_lhs = parent.at_or_below;
    for (size_t i = 0; i < dirichlet.size(); ++i) {
      c.lower_rhs += i == d ? dirichlet[i].below : dirichlet[i].at_or_below;
      c.upper_rhs += i == d ? neumann[i].at_or_below : neumann[i].below;
    }
    c.lower_holds = c.lower_lhs >= c.lower_rhs;
    c.upper_holds = c.upper_lhs <= c.upper_rhs;
    out.push_back(c);
  }
  return out;
}

namespace {

bool near_threshold(const std::vector<double>& eig, double t, double tol) {
  return std::any_of(eig.begin(), eig.end(), [&](double l) { return std::abs(l - t) <= tol; });
}

void require_transitive(const SurfaceMesh& mesh, const GroupAction& g) {
  int count = 0;
  const auto label = triangle_components(mesh, &count);
  if (count <= 1) return;
  std::set<int> reached;
  for (const auto& tmap : g.triangle_maps) reached.insert(label[tmap[0]]);
  if (static_cast<int>(reached.size()) != count)
    throw InvalidInput("group does not act transitively on the components of the domain");
}

}  // namespace

MontielRosReport montiel_ros_check(const ProblemSpec& p, const Partition& partition, double t,
                                   const GroupAction* group, const MontielRosOptions& opts) {
  validate_partition(p.mesh, partition);
  if (!(opts.zero_tol >= 0.0)) throw InvalidInput("zero_tol must be non-negative");
  std::optional<GroupAction> parent_group;
  if (group) {
    parent_group = group->acts() && static_cast<int>(group->vertex_maps[0].size()) == p.vertex_count()
                       ? *group
                       : act_on_mesh(*group, p.mesh);
    require_transitive(p.mesh, *parent_group);
    for (size_t i = 0; i < partition.pieces.size(); ++i) {
      std::set<int> members(partition.pieces[i].begin(), partition.pieces[i].end());
      for (const auto& tmap : parent_group->triangle_maps)
        for (int tri : partition.pieces[i])
          if (!members.count(tmap[tri]))
            throw InvalidInput("piece " + std::to_string(i) + " is not invariant under the group");
    }
  }
  const double above = t + opts.zero_tol;

  MontielRosReport rep;
  rep.t = t;
  rep.zero_tol = opts.zero_tol;
  if (group) rep.group = group->name;

  const Spectrum ps = solve_covering(p, above, opts.solve, parent_group ? &*parent_group : nullptr, opts.strategy);
  rep.parent_eigenvalues = ps.eigenvalues;
  rep.parent = count_eigenvalues(ps.eigenvalues, t, opts.zero_tol);

  const size_t n = partition.pieces.size();
  rep.pieces.resize(n);
  for (size_t i = 0; i < n; ++i) rep.pieces[i].triangles = static_cast<int>(partition.pieces[i].size());
  parallel_for(2 * n, [&](size_t job) {
    const size_t i = job / 2;
    const BoundaryTag mode = job % 2 == 0 ? BoundaryTag::Dirichlet : BoundaryTag::Neumann;
    const ProblemSpec piece = internalize(p, partition.pieces[i], mode);
    Spectrum s;
    if (group) {
      const GroupAction g = act_on_mesh(*group, piece.mesh);
      s = solve_covering(piece, above, opts.solve, &g, opts.strategy);
    } else {
      s = solve_covering(piece, above, opts.solve);
    }
    auto& rec = rep.pieces[i];
    if (mode == BoundaryTag::Dirichlet) {
      rec.dirichlet_eigenvalues = s.eigenvalues;
      rec.dirichlet = count_eigenvalues(s.eigenvalues, t, opts.zero_tol);
    } else {
      rec.neumann_eigenvalues = s.eigenvalues;
      rec.neumann = count_eigenvalues(s.eigenvalues, t, opts.zero_tol);
    }
  });

  rep.separated = !near_threshold(rep.parent_eigenvalues, t, opts.zero_tol);
  std::vector<Counts> d, nn;
  for (const auto& rec : rep.pieces) {
    rep.separated = rep.separated && !near_threshold(rec.dirichlet_eigenvalues, t, opts.zero_tol) &&
                    !near_threshold(rec.neumann_eigenvalues, t, opts.zero_tol);
    d.push_back(rec.dirichlet);
    nn.push_back(rec.neumann);
  }
  if (opts.require_separation && !rep.separated)
    throw InvalidInput("threshold t lies within zero_tol of a computed eigenvalue");
  rep.checks = check_counting_inequalities(rep.parent, d, nn);
  rep.all_hold = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const InequalityCheck& c) { return c.lower_holds && c.upper_holds; });
  return rep;
}

double extension_by_zero_rayleigh(const ProblemSpec& parent, const Submesh& piece, const Eigen::VectorXd& values) {
  if (values.size() != piece.mesh.vertex_count()) throw InvalidInput("expected one value per piece vertex");
  std::vector<double> ext(parent.vertex_count(), 0.0);
  for (int v = 0; v < piece.mesh.vertex_count(); ++v) ext[piece.vertex_to_parent[v]] = values[v];
  return rayleigh(assemble(parent), ext);
}

BoundLedger isometric_pieces_bounds(const PieceBounds& r, int n) {
  if (n < 1) throw InvalidInput("piece count must be >= 1");
  if (r.ind_d < 0 || r.nul_d < 0 || r.ind_n < 0 || r.nul_n < 0) throw InvalidInput("negative index or nullity");
  BoundLedger b;
  b.pieces = n;
  b.lower = n * r.ind_d + (n - 1) * r.nul_d;
  b.upper = n * r.ind_n + r.nul_n;
  b.slack = n * (r.ind_n - r.ind_d) - ((n - 1) * r.nul_d - r.nul_n);
  b.consistent = b.lower <= b.upper;
  return b;
}

LowerBoundVariant lower_bound_variant_from_name(const std::string& name) {
  if (name == "pyramidal") return LowerBoundVariant::Pyramidal;
  if (name == "plane_odd") return LowerBoundVariant::PlaneOdd;
  if (name == "prism_even") return LowerBoundVariant::PrismEven;
  throw InvalidInput("unknown lower bound variant '" + name + "'");
}

int symmetry_lower_bound(int k, LowerBoundVariant variant) {
  if (k < 2) throw InvalidInput("symmetry lower bound needs k >= 2");
  switch (variant) {
    case LowerBoundVariant::Pyramidal:
    case LowerBoundVariant::PrismEven:
      return 2 * k - 1;
    case LowerBoundVariant::PlaneOdd:
      return k - 1;
  }
  return 0;
}

std::string Affine::str() const {
  std::ostringstream s;
  if (coefficient != 0) {
    if (coefficient != 1) s << coefficient;
    s << variable;
    if (constant > 0) s << '+' << constant;
    else if (constant < 0) s << constant;
  } else {
    s << constant;
  }
  return s.str();
}

std::vector<BlockRow> standard_block_rows(const std::string& recipe) {
  if (recipe == "antiprismatic")
    return {{"catenoidal", 1, 1, 0, false}, {"tower", 1, 1, 0, false}, {"disc", 1, 0, 0, true}};
  if (recipe == "pyramidal")
    return {{"catenoidal", 2, 1, 0, false}, {"tower", 1, 3, 0, false}, {"disc", 1, 0, 1, true}};
  if (recipe == "prismatic") return {{"catenoidal", 1, 1, 0, false}, {"tower", 1, 1, 0, true}};
  throw InvalidInput("unknown ledger recipe '" + recipe + "'");
}

GluedLedger glued_surface_ledger(const std::string& recipe, const std::vector<BlockRow>& rows) {
  std::vector<std::string> required;
  GluedLedger out;
  out.recipe = recipe;
  if (recipe == "antiprismatic" || recipe == "pyramidal") {
    required = {"catenoidal", "tower", "disc"};
    out.piece_count = {2, 2, "m"};  // 2(m+1) wedges
  } else if (recipe == "prismatic") {
    required = {"catenoidal", "tower"};
    out.piece_count = {0, 4, "n"};
  } else {
    throw InvalidInput("unknown ledger recipe '" + recipe + "'");
  }
  int distinguished = 0;
  for (const auto& name : required) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const BlockRow& r) { return r.block == name; });
    if (it == rows.end()) throw InvalidInput("ledger recipe " + recipe + " is missing block row '" + name + "'");
    if (it->ind < 0 || it->nul < 0 || it->multiplicity < 1) throw InvalidInput("invalid block row '" + name + "'");
    const int term = it->multiplicity * it->ind + (it->distinguished ? it->nul : 0);
    distinguished += it->distinguished ? 1 : 0;
    out.rows.push_back(*it);
    out.terms.push_back(term);
    out.equivariant_bound += term;
  }
  if (distinguished != 1) throw InvalidInput("ledger needs exactly one distinguished block");
  // Only the pyramidal and prismatic bounds are per-wedge statements that
  // multiply out to absolute bounds.
  if (recipe == "antiprismatic") out.piece_count = {};
  out.absolute_bound = {out.piece_count.constant * out.equivariant_bound,
                        out.piece_count.coefficient * out.equivariant_bound, out.piece_count.variable};
  return out;
}

}  // namespace equispec
