#include "equispec.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "equispec/expression.hpp"
#include "equispec/io.hpp"
#include "equispec/reproduce.hpp"

using namespace equispec;

struct es_mesh {
  SurfaceMesh mesh;
};

struct es_problem {
  ProblemSpec problem;
};

struct es_group {
  GroupAction group;
};

struct es_spectrum {
  Spectrum spectrum;
  ReportContext ctx;
  SurfaceMesh mesh;
};

struct es_config {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string base_dir = ".";
};

namespace {

thread_local std::string g_error;

es_status fail(es_status code, const std::string& msg) {
  g_error = msg;
  return code;
}

// Runs f, mapping library exceptions onto status codes.
template <class F>
es_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const InvalidInput& e) {
    return fail(ES_INVALID_INPUT, e.what());
  } catch (const NotConverged& e) {
    return fail(ES_NOT_CONVERGED, e.what());
  } catch (const InsufficientSpectrum& e) {
    return fail(ES_INSUFFICIENT_SPECTRUM, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ES_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ES_INTERNAL, e.what());
  }
}

#define ES_REQUIRE(cond, what) \
  do {                         \
    if (!(cond)) return fail(ES_INVALID_INPUT, what); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ScalarField field(const char* expr) {
  const Expression e = Expression::parse(expr);
  return [e](const Vec3& p) { return e.eval(p.x(), p.y(), p.z()); };
}

Params parse_params(const char* text) {
  Params out;
  if (!text) return out;
  std::string s(text);
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("mesh parameter '" + tok + "' is not name=value");
    const Expression e = Expression::parse(tok.substr(eq + 1));
    out[tok.substr(0, eq)] = e.eval(0.0, 0.0, 0.0);
  }
  return out;
}

std::string config_text(const es_config* c) {
  std::string text;
  for (const auto& [k, v] : c->entries) text += k + " = \"" + v + "\"\n";
  return text;
}

bool accumulates(const std::string& key) { return key == "dirichlet" || key == "neumann" || key == "robin_edges"; }

void config_set(es_config* c, std::string key, std::string value) {
  ProblemConfig probe;
  apply_config_entry(probe, key, value, c->base_dir);  // validates key and value
  if (key == "mesh" && !std::filesystem::path(value).is_absolute())
    value = std::filesystem::absolute(std::filesystem::path(c->base_dir) / value).lexically_normal().string();
  auto& e = c->entries;
  if (!accumulates(key)) {
    // builtin and mesh replace each other
    const std::string rival = key == "builtin" ? "mesh" : (key == "mesh" ? "builtin" : "");
    e.erase(std::remove_if(e.begin(), e.end(), [&](const auto& kv) { return kv.first == key || kv.first == rival; }),
            e.end());
  }
  e.emplace_back(std::move(key), std::move(value));
}

ProblemConfig parsed(const es_config* c) { return parse_problem_config(config_text(c), "/"); }

ReportContext context_for(const ProblemConfig& cfg, const ProblemSpec& p) {
  ReportContext ctx;
  ctx.config_hash = fnv1a(cfg.canonical());
  ctx.level = p.level;
  ctx.zero_tol = cfg.zero_tol.value_or(0.05);
  ctx.problem = p.name;
  return ctx;
}

std::optional<GroupAction> config_group(const ProblemConfig& cfg, const ProblemSpec& p) {
  if (!cfg.group) {
    if (cfg.twist) throw InvalidInput("twist given without a group");
    return std::nullopt;
  }
  return build_group(*cfg.group, cfg.twist.value_or("trivial"), p.mesh);
}

SolveOptions config_solve(const ProblemConfig& cfg) {
  SolveOptions o;
  o.count = cfg.count.value_or(6);
  o.seed = cfg.seed.value_or(0);
  return o;
}

}  // namespace

extern "C" {

ES_API const char* es_last_error(void) { return g_error.c_str(); }

ES_API const char* es_version(void) { return "1.0.0"; }

ES_API void es_string_free(char* s) { std::free(s); }

ES_API es_status es_mesh_builtin(const char* domain, int level, const char* params, es_mesh** out) {
  ES_REQUIRE(domain && out, "null argument");
  ES_REQUIRE(level >= 0, "level must be >= 0");
  return guarded([&] {
    *out = new es_mesh{build_builtin(domain_from_name(domain), level, parse_params(params))};
    return ES_OK;
  });
}

ES_API es_status es_mesh_load(const char* path, es_mesh** out) {
  ES_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new es_mesh{load_mesh(path)};
    return ES_OK;
  });
}

ES_API es_status es_mesh_save(const es_mesh* mesh, const char* path) {
  ES_REQUIRE(mesh && path, "null argument");
  return guarded([&] {
    save_mesh(path, mesh->mesh);
    return ES_OK;
  });
}

ES_API es_status es_mesh_refine(const es_mesh* mesh, es_mesh** out) {
  ES_REQUIRE(mesh && out, "null argument");
  return guarded([&] {
    *out = new es_mesh{refine(mesh->mesh)};
    return ES_OK;
  });
}

ES_API int es_mesh_vertex_count(const es_mesh* mesh) { return mesh ? mesh->mesh.vertex_count() : -1; }

ES_API int es_mesh_triangle_count(const es_mesh* mesh) { return mesh ? mesh->mesh.triangle_count() : -1; }

ES_API void es_mesh_free(es_mesh* mesh) { delete mesh; }

ES_API es_status es_problem_create(const es_mesh* mesh, int level, es_problem** out) {
  ES_REQUIRE(mesh && out, "null argument");
  ES_REQUIRE(level >= 0, "level must be >= 0");
  return guarded([&] {
    *out = new es_problem{make_problem(mesh->mesh, level)};
    return ES_OK;
  });
}

ES_API es_status es_problem_set_potential(es_problem* p, const char* expr) {
  ES_REQUIRE(p && expr, "null argument");
  return guarded([&] {
    set_potential(p->problem, field(expr));
    return ES_OK;
  });
}

ES_API es_status es_problem_set_potential_jacobi(es_problem* p) {
  ES_REQUIRE(p, "null argument");
  ES_REQUIRE(p->problem.mesh.chart, "mesh has no chart to read the Jacobi potential from");
  return guarded([&] {
    set_potential(p->problem, jacobi_potential(*p->problem.mesh.chart));
    return ES_OK;
  });
}

ES_API es_status es_problem_set_robin(es_problem* p, const char* expr) {
  ES_REQUIRE(p && expr, "null argument");
  return guarded([&] {
    set_robin(p->problem, field(expr));
    return ES_OK;
  });
}

ES_API es_status es_problem_tag_boundary(es_problem* p, const char* predicate, char tag, int* count) {
  ES_REQUIRE(p && predicate, "null argument");
  return guarded([&] {
    const BoundaryTag t = tag_from_letter(tag);
    const Expression e = Expression::parse(predicate);
    const int n = tag_boundary(p->problem, [&](const Vec3& m) { return e.eval(m.x(), m.y(), m.z()) != 0.0; }, t);
    if (count) *count = n;
    return ES_OK;
  });
}

ES_API es_status es_problem_tag_robin_top(es_problem* p) {
  ES_REQUIRE(p, "null argument");
  return guarded([&] {
    tag_robin_top(p->problem);
    return ES_OK;
  });
}

ES_API es_status es_problem_apply_conformal(es_problem* p, const char* rho) {
  ES_REQUIRE(p && rho, "null argument");
  return guarded([&] {
    const ScalarField f = field(rho);
    std::vector<double> samples(p->problem.vertex_count());
    for (int v = 0; v < p->problem.vertex_count(); ++v) samples[v] = f(p->problem.mesh.vertices[v]);
    p->problem = apply_conformal_change(p->problem, samples);
    return ES_OK;
  });
}

ES_API int es_problem_vertex_count(const es_problem* p) { return p ? p->problem.vertex_count() : -1; }

ES_API void es_problem_free(es_problem* p) { delete p; }

ES_API es_status es_group_create(const char* group, const char* twist, const es_problem* p, es_group** out) {
  ES_REQUIRE(group && p && out, "null argument");
  return guarded([&] {
    *out = new es_group{build_group(group, twist ? twist : "trivial", p->problem.mesh)};
    return ES_OK;
  });
}

ES_API int es_group_order(const es_group* g) { return g ? g->group.order() : -1; }

ES_API int es_group_twist(const es_group* g, int element) {
  if (!g || element < 0 || element >= g->group.order()) return 0;
  return g->group.twist[element];
}

ES_API void es_group_free(es_group* g) { delete g; }

ES_API es_status es_solve(const es_problem* p, const es_group* g, int count, double zero_tol, const char* strategy,
                          es_spectrum** out) {
  ES_REQUIRE(p && out, "null argument");
  ES_REQUIRE(count >= 1, "count must be positive");
  ES_REQUIRE(zero_tol > 0.0, "zero_tol must be positive");
  return guarded([&] {
    SolveOptions opts;
    opts.count = count;
    const Strategy st = strategy ? strategy_from_name(strategy) : Strategy::ProjectedSubspace;
    auto s = std::make_unique<es_spectrum>();
    s->spectrum = solve_covering(p->problem, zero_tol, opts, g ? &g->group : nullptr, st);
    s->ctx.config_hash = problem_hash(p->problem);
    s->ctx.level = p->problem.level;
    s->ctx.zero_tol = zero_tol;
    s->ctx.problem = p->problem.name;
    s->mesh = p->problem.mesh;
    *out = s.release();
    return ES_OK;
  });
}

ES_API int es_spectrum_size(const es_spectrum* s) { return s ? s->spectrum.size() : -1; }

ES_API es_status es_spectrum_eigenvalue(const es_spectrum* s, int i, double* value) {
  ES_REQUIRE(s && value, "null argument");
  ES_REQUIRE(i >= 0 && i < s->spectrum.size(), "eigenvalue index out of range");
  *value = s->spectrum.eigenvalues[i];
  return ES_OK;
}

ES_API es_status es_spectrum_index_nullity(const es_spectrum* s, int* index, int* nullity) {
  ES_REQUIRE(s && index && nullity, "null argument");
  return guarded([&] {
    const IndexNullity in = equispec::index_nullity(s->spectrum, s->ctx.zero_tol);
    *index = in.index;
    *nullity = in.nullity;
    return ES_OK;
  });
}

ES_API es_status es_spectrum_to_json(const es_spectrum* s, char** json) {
  ES_REQUIRE(s && json, "null argument");
  return guarded([&] {
    *json = copy_string(dump(spectrum_json(s->spectrum, s->ctx)));
    return ES_OK;
  });
}

ES_API es_status es_spectrum_to_csv(const es_spectrum* s, char** csv) {
  ES_REQUIRE(s && csv, "null argument");
  return guarded([&] {
    *csv = copy_string(spectrum_csv(s->spectrum, s->ctx.zero_tol));
    return ES_OK;
  });
}

ES_API es_status es_spectrum_eigenfunction_csv(const es_spectrum* s, int i, char** csv) {
  ES_REQUIRE(s && csv, "null argument");
  ES_REQUIRE(i >= 0 && i < s->spectrum.size(), "eigenfunction index out of range");
  return guarded([&] {
    const Eigen::VectorXd col = s->spectrum.eigenfunctions.col(i);
    const std::vector<double> values(col.data(), col.data() + col.size());
    const NodalDomains nd = nodal_domains(s->mesh, values);
    *csv = copy_string(eigenfunction_csv(s->mesh, values, &nd));
    return ES_OK;
  });
}

ES_API void es_spectrum_free(es_spectrum* s) { delete s; }

ES_API es_status es_config_create(es_config** out) {
  ES_REQUIRE(out, "null argument");
  *out = new es_config;
  return ES_OK;
}

ES_API es_status es_config_set(es_config* c, const char* key, const char* value) {
  ES_REQUIRE(c && key && value, "null argument");
  return guarded([&] {
    config_set(c, key, value);
    return ES_OK;
  });
}

ES_API es_status es_config_merge_file(es_config* c, const char* path) {
  ES_REQUIRE(c && path, "null argument");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw InvalidInput(std::string("cannot open config file ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto entries = parse_config_entries(ss.str());
    const std::string saved = c->base_dir;
    c->base_dir = std::filesystem::absolute(std::filesystem::path(path)).parent_path().string();
    try {
      for (const auto& [k, v] : entries) config_set(c, k, v);
    } catch (...) {
      c->base_dir = saved;
      throw;
    }
    c->base_dir = saved;
    return ES_OK;
  });
}

ES_API es_status es_config_hash(const es_config* c, char** hex) {
  ES_REQUIRE(c && hex, "null argument");
  return guarded([&] {
    *hex = copy_string(hex64(fnv1a(parsed(c).canonical())));
    return ES_OK;
  });
}

ES_API void es_config_free(es_config* c) { delete c; }

ES_API es_status es_run_spectrum(const es_config* c, es_spectrum** out) {
  ES_REQUIRE(c && out, "null argument");
  return guarded([&] {
    const ProblemConfig cfg = parsed(c);
    const ProblemSpec p = build_problem(cfg);
    const auto g = config_group(cfg, p);
    const Strategy st = cfg.strategy ? strategy_from_name(*cfg.strategy) : Strategy::ProjectedSubspace;
    auto s = std::make_unique<es_spectrum>();
    s->ctx = context_for(cfg, p);
    s->spectrum = solve_covering(p, s->ctx.zero_tol, config_solve(cfg), g ? &*g : nullptr, st);
    s->mesh = p.mesh;
    *out = s.release();
    return ES_OK;
  });
}

ES_API es_status es_run_montiel_ros(const es_config* c, const char* partition_path, double t, char** json) {
  ES_REQUIRE(c && partition_path && json, "null argument");
  return guarded([&] {
    const ProblemConfig cfg = parsed(c);
    const ProblemSpec p = build_problem(cfg);
    const Partition part = load_partition(partition_path);
    validate_partition(p.mesh, part);
    const auto g = config_group(cfg, p);
    MontielRosOptions opts;
    opts.zero_tol = cfg.zero_tol.value_or(0.05);
    opts.solve = config_solve(cfg);
    if (cfg.strategy) opts.strategy = strategy_from_name(*cfg.strategy);
    const MontielRosReport rep = montiel_ros_check(p, part, t, g ? &*g : nullptr, opts);
    *json = copy_string(dump(montiel_ros_json(rep, context_for(cfg, p))));
    if (!rep.all_hold) return fail(ES_INEQUALITY_FAILED, "a counting inequality failed");
    return ES_OK;
  });
}

ES_API es_status es_run_convergence(const es_config* c, int levels, char** json) {
  ES_REQUIRE(c && json, "null argument");
  ES_REQUIRE(levels >= 1, "levels must be positive");
  return guarded([&] {
    const ProblemConfig cfg = parsed(c);
    const ProblemSpec p = build_problem(cfg);
    const auto g = config_group(cfg, p);
    std::optional<EquivariantSetup> eq;
    if (g) eq = EquivariantSetup{*g, cfg.strategy ? strategy_from_name(*cfg.strategy) : Strategy::ProjectedSubspace};
    const ConvergenceStudy st =
        convergence_study(p, levels, cfg.count.value_or(6), eq ? &*eq : nullptr, cfg.seed.value_or(0));
    *json = copy_string(dump(convergence_json(st, context_for(cfg, p))));
    return ES_OK;
  });
}

ES_API es_status es_reproduce(const char* suite, char** json, char** table) {
  ES_REQUIRE(suite && json && table, "null argument");
  return guarded([&] {
    const ReproduceResult r = reproduce(suite);
    *json = copy_string(dump(reproduce_json(r)));
    *table = copy_string(reproduce_table(r));
    if (!r.pass) {
      for (const auto& row : r.rows)
        if (!row.pass) return fail(ES_MISMATCH, r.suite + ": row '" + row.name + "' does not match");
    }
    return ES_OK;
  });
}

}  // extern "C"
