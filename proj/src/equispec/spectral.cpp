#include "equispec/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "equispec/eigensolver.hpp"

namespace equispec {

namespace {

Spectrum from_result(const EigenResult& r, const Assembly& a, const Eigen::MatrixXd& free_vectors) {
  Spectrum s;
  s.eigenvalues.assign(r.values.data(), r.values.data() + r.values.size());
  s.residuals = r.residuals;
  s.iterations = r.iterations;
  s.method = r.method;
  s.shift = a.shift;
  s.trace_constant = a.trace_constant;
  s.eigenfunctions.setZero(a.vertex_count, r.values.size());
  for (Eigen::Index j = 0; j < free_vectors.cols(); ++j)
    for (int i = 0; i < a.size(); ++i) s.eigenfunctions(a.free_vertices[i], j) = free_vectors(i, j);
  return s;
}

std::vector<double> prolong(const Eigen::VectorXd& coarse, const std::vector<std::array<int, 2>>& parents) {
  std::vector<double> out(coarse.data(), coarse.data() + coarse.size());
  for (const auto& pr : parents) out.push_back(0.5 * (coarse[pr[0]] + coarse[pr[1]]));
  return out;
}

}  // namespace

Spectrum solve(const Assembly& a, const SolveOptions& opts, std::uint64_t problem_seed, int level) {
  if (opts.count < 1) throw InvalidInput("eigenvalue count must be positive");
  EigenOptions eo;
  eo.count = std::min(opts.count, a.size());
  eo.shift = a.shift;
  eo.seed = opts.seed ? opts.seed : problem_seed;
  eo.dense_limit = opts.dense_limit;
  const EigenResult r = solve_generalized(a.K, a.M, eo);
  Spectrum s = from_result(r, a, r.vectors);
  s.dimension = a.size();
  s.complete = eo.count == a.size();
  s.level = level;
  s.seed = eo.seed;
  return s;
}

Spectrum solve(const ProblemSpec& p, const SolveOptions& opts) {
  return solve(assemble(p), opts, problem_hash(p), p.level);
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "projected_subspace" || name == "projected") return Strategy::ProjectedSubspace;
  if (name == "fundamental_domain") return Strategy::FundamentalDomain;
  throw InvalidInput("unknown strategy '" + name + "'");
}

std::string strategy_name(Strategy s) {
  return s == Strategy::ProjectedSubspace ? "projected_subspace" : "fundamental_domain";
}

SparseMatrix invariant_basis(const GroupAction& group, const Assembly& a) {
  if (!group.acts()) throw InvalidInput("group has not been realized on the mesh");
  if (static_cast<int>(group.vertex_maps[0].size()) != a.vertex_count)
    throw InvalidInput("group action was realized on a different mesh");
  std::vector<char> seen(a.vertex_count, 0);
  std::vector<Eigen::Triplet<double>> trips;
  int cols = 0;
  for (int v : a.free_vertices) {
    if (seen[v]) continue;
    bool odd_stabilizer = false;
    std::vector<std::pair<int, int>> coef;  // vertex, sign
    for (int g = 0; g < group.order(); ++g) {
      const int w = group.vertex_maps[g][v];
      seen[w] = 1;
      if (w == v && group.twist[g] < 0) odd_stabilizer = true;
      coef.emplace_back(w, group.twist[g]);
    }
    if (odd_stabilizer) continue;
    std::sort(coef.begin(), coef.end());
    coef.erase(std::unique(coef.begin(), coef.end(),
                           [](const auto& x, const auto& y) { return x.first == y.first; }),
               coef.end());
    for (const auto& [w, sign] : coef) {
      const int row = a.free_index[w];
      if (row < 0) throw InvalidInput("group mixes free and Dirichlet vertices");
      trips.emplace_back(row, cols, static_cast<double>(sign));
    }
    ++cols;
  }
  SparseMatrix B(a.size(), cols);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

Spectrum solve_equivariant(const ProblemSpec& p, const GroupAction& group, const SolveOptions& opts,
                           Strategy strategy) {
  if (opts.count < 1) throw InvalidInput("eigenvalue count must be positive");
  check_invariant(group, p);
  if (strategy == Strategy::FundamentalDomain) {
    FundamentalDomain fd;
    const ProblemSpec reduced = fundamental_domain_reduce(p, group, &fd);
    Spectrum s = solve(reduced, opts);
    // Unfold each eigenfunction to the parent mesh by equivariance.
    Eigen::MatrixXd parent = Eigen::MatrixXd::Zero(p.vertex_count(), s.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(group.order()));
    for (int v = 0; v < reduced.vertex_count(); ++v) {
      const int pv = fd.submesh.vertex_to_parent[v];
      for (int g = 0; g < group.order(); ++g)
        parent.row(group.vertex_maps[g][pv]) = group.twist[g] * scale * s.eigenfunctions.row(v);
    }
    s.eigenfunctions = parent;
    s.subspace = "reduced";
    s.group = group.name;
    s.twist = group.twist;
    s.level = p.level;
    return s;
  }

  const Assembly a = assemble(p);
  const SparseMatrix B = invariant_basis(group, a);
  const int dim = static_cast<int>(B.cols());
  Spectrum s;
  if (dim == 0) {
    s.eigenfunctions.resize(p.vertex_count(), 0);
    s.complete = true;
    s.method = "empty";
  } else {
    const SparseMatrix Kr = SparseMatrix(B.transpose() * a.K * B);
    const SparseMatrix Mr = SparseMatrix(B.transpose() * a.M * B);
    EigenOptions eo;
    eo.count = std::min(opts.count, dim);
    eo.shift = a.shift;
    eo.seed = opts.seed ? opts.seed : problem_hash(p);
    eo.dense_limit = opts.dense_limit;
    const EigenResult r = solve_generalized(Kr, Mr, eo);
    s = from_result(r, a, B * r.vectors);
    s.complete = eo.count == dim;
    s.seed = eo.seed;
  }
  s.shift = a.shift;
  s.trace_constant = a.trace_constant;
  s.dimension = dim;
  s.level = p.level;
  s.subspace = "projected";
  s.group = group.name;
  s.twist = group.twist;
  return s;
}

IndexNullity index_nullity(const Spectrum& s, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw InvalidInput("zero_tol must be non-negative");
  if (!s.complete && (s.eigenvalues.empty() || s.eigenvalues.back() <= zero_tol))
    throw InsufficientSpectrum("spectrum does not reach past zero_tol; request more eigenvalues");
  IndexNullity r;
  r.margin = INFINITY;
  for (double l : s.eigenvalues) {
    if (l < -zero_tol) ++r.index;
    else if (l <= zero_tol) ++r.nullity;
    r.margin = std::min(r.margin, std::abs(std::abs(l) - zero_tol));
  }
  if (s.eigenvalues.empty()) r.margin = 0.0;
  return r;
}

Spectrum solve_covering(const ProblemSpec& p, double above, SolveOptions opts, const GroupAction* group,
                        Strategy strategy) {
  for (;;) {
    Spectrum s = group ? solve_equivariant(p, *group, opts, strategy) : solve(p, opts);
    if (s.complete || (!s.eigenvalues.empty() && s.eigenvalues.back() > above)) return s;
    opts.count *= 2;
  }
}

ConvergenceRow richardson(const std::vector<double>& values) {
  ConvergenceRow row;
  row.values = values;
  const size_t n = values.size();
  if (n == 0) return row;
  row.extrapolated = values.back();
  if (n < 3) {
    row.order_assumed = true;
    row.error_bar = n == 2 ? std::abs(values[1] - values[0]) : INFINITY;
    return row;
  }
  const double d1 = values[n - 2] - values[n - 3];
  const double d2 = values[n - 1] - values[n - 2];
  const double scale = std::max(1.0, std::abs(values.back()));
  if (std::abs(d2) <= 1e-13 * scale) {
    // converged to rounding (e.g. exactly representable eigenfunction)
    row.order = INFINITY;
    row.error_bar = std::abs(d2);
    return row;
  }
  double p = 2.0;
  if (d1 != 0.0 && d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) {
    p = std::log2(d1 / d2);
    if (p < 0.5 || p > 6.0) {
      p = 2.0;
      row.order_assumed = true;
    }
  } else {
    row.order_assumed = true;
  }
  row.order = p;
  const double correction = d2 / (std::pow(2.0, p) - 1.0);
  row.extrapolated = values.back() + correction;
  row.error_bar = std::abs(correction);
  return row;
}

ConvergenceStudy convergence_study(const ProblemSpec& p, int levels, int count,
                                   const EquivariantSetup* equivariant, std::uint64_t seed) {
  if (levels < 3) throw InvalidInput("convergence study needs at least 3 levels");
  if (count < 1) throw InvalidInput("eigenvalue count must be positive");
  ConvergenceStudy study;
  ProblemSpec cur = p;
  std::vector<std::vector<std::array<int, 2>>> parents;
  std::vector<SparseMatrix> mass;
  SolveOptions opts;
  opts.count = count;
  opts.seed = seed;
  for (int l = 0; l < levels; ++l) {
    if (l > 0) {
      Refinement r;
      cur = refine_problem(cur, &r);
      parents.push_back(std::move(r.parents));
    }
    Spectrum s;
    if (equivariant) {
      const GroupAction g = act_on_mesh(equivariant->group, cur.mesh);
      s = solve_equivariant(cur, g, opts, equivariant->strategy);
    } else {
      s = solve(cur, opts);
    }
    SparseMatrix K, M;
    assemble_full(cur, K, M);
    mass.push_back(std::move(M));
    study.levels.push_back(cur.level);
    study.mesh_sizes.push_back(max_edge_length(cur.mesh));
    study.spectra.push_back(std::move(s));
  }

  int available = count;
  for (const auto& s : study.spectra) available = std::min(available, s.size());
  for (int i = 0; i < available; ++i) {
    std::vector<double> values;
    for (const auto& s : study.spectra) values.push_back(s.eigenvalues[i]);
    ConvergenceRow row = richardson(values);
    row.index = i + 1;
    for (int l = 1; l < levels; ++l) {
      const Spectrum& coarse = study.spectra[l - 1];
      const Spectrum& fine = study.spectra[l];
      const std::vector<double> u = prolong(coarse.eigenfunctions.col(i), parents[l - 1]);
      const Eigen::Map<const Eigen::VectorXd> uc(u.data(), static_cast<Eigen::Index>(u.size()));
      const Eigen::VectorXd Mu = mass[l] * uc;
      const double norm2 = uc.dot(Mu);
      const double li = fine.eigenvalues[i];
      const double width = std::max(0.02 * std::max(1.0, std::abs(li)), 2.0 * std::abs(li - coarse.eigenvalues[i]));
      double captured = 0.0;
      for (int j = 0; j < fine.size(); ++j)
        if (std::abs(fine.eigenvalues[j] - li) <= width) {
          const double c = fine.eigenfunctions.col(j).dot(Mu);
          captured += c * c;
        }
      const double overlap = norm2 > 0.0 ? std::sqrt(captured / norm2) : 0.0;
      row.overlap = std::min(row.overlap, overlap);
    }
    if (row.overlap * row.overlap < 0.5) {
      row.crossing = true;
      row.extrapolated = values.back();
      row.error_bar = INFINITY;
    }
    study.rows.push_back(std::move(row));
  }
  return study;
}

}  // namespace equispec
