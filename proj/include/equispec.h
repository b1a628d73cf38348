#ifndef EQUISPEC_H
#define EQUISPEC_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(EQUISPEC_BUILDING)
#define ES_API __attribute__((visibility("default")))
#else
#define ES_API
#endif

/* Status codes double as the command-line exit codes. */
typedef enum es_status {
  ES_OK = 0,
  ES_INTERNAL = 1,
  ES_INVALID_INPUT = 2,
  ES_NOT_CONVERGED = 3,
  ES_INEQUALITY_FAILED = 4,
  ES_MISMATCH = 5,
  ES_INSUFFICIENT_SPECTRUM = 6
} es_status;

typedef struct es_mesh es_mesh;
typedef struct es_problem es_problem;
typedef struct es_group es_group;
typedef struct es_spectrum es_spectrum;
typedef struct es_config es_config;

/* Message of the last failing call on this thread ("" after success). */
ES_API const char* es_last_error(void);
ES_API const char* es_version(void);
/* Strings returned through char** out-parameters are released here. */
ES_API void es_string_free(char* s);

/* ---- meshes ---- */
/* params: "name=value" pairs separated by commas, or NULL. */
ES_API es_status es_mesh_builtin(const char* domain, int level, const char* params, es_mesh** out);
ES_API es_status es_mesh_load(const char* path, es_mesh** out);
ES_API es_status es_mesh_save(const es_mesh* mesh, const char* path);
ES_API es_status es_mesh_refine(const es_mesh* mesh, es_mesh** out);
ES_API int es_mesh_vertex_count(const es_mesh* mesh);
ES_API int es_mesh_triangle_count(const es_mesh* mesh);
ES_API void es_mesh_free(es_mesh* mesh);

/* ---- problems ---- */
/* The mesh is copied; q = 0, r = 0 and the mesh's boundary tags. */
ES_API es_status es_problem_create(const es_mesh* mesh, int level, es_problem** out);
/* expr in x, y, z, e.g. "2" or "1 + 0.1*x^2". */
ES_API es_status es_problem_set_potential(es_problem* p, const char* expr);
ES_API es_status es_problem_set_potential_jacobi(es_problem* p);
ES_API es_status es_problem_set_robin(es_problem* p, const char* expr);
/* Retags boundary edges whose midpoint satisfies predicate; tag is 'D', 'N'
 * or 'R'. The number of retagged edges is written to count when non-NULL. */
ES_API es_status es_problem_tag_boundary(es_problem* p, const char* predicate, char tag, int* count);
ES_API es_status es_problem_tag_robin_top(es_problem* p);
/* Replaces the metric g by rho^2 g, rho given by a positive expression. */
ES_API es_status es_problem_apply_conformal(es_problem* p, const char* rho);
ES_API int es_problem_vertex_count(const es_problem* p);
ES_API void es_problem_free(es_problem* p);

/* ---- groups ---- */
/* group: "pyramidal:K", "prismatic:K", "antiprismatic:K", "reflection_plane",
 * "reflection_line", "trivial". twist: "trivial", "determinant",
 * "normal_sign" or "[+1,-1,...]" in element order. Realized on the
 * problem's mesh. */
ES_API es_status es_group_create(const char* group, const char* twist, const es_problem* p, es_group** out);
ES_API int es_group_order(const es_group* g);
ES_API int es_group_twist(const es_group* g, int element);
ES_API void es_group_free(es_group* g);

/* ---- solving ---- */
/* Lowest count eigenvalues (at least enough to pass zero_tol). group may be
 * NULL; strategy "projected_subspace" or "fundamental_domain" (NULL for the
 * former). */
ES_API es_status es_solve(const es_problem* p, const es_group* g, int count, double zero_tol, const char* strategy,
                          es_spectrum** out);
ES_API int es_spectrum_size(const es_spectrum* s);
ES_API es_status es_spectrum_eigenvalue(const es_spectrum* s, int i, double* value);
ES_API es_status es_spectrum_index_nullity(const es_spectrum* s, int* index, int* nullity);
ES_API es_status es_spectrum_to_json(const es_spectrum* s, char** json);
ES_API es_status es_spectrum_to_csv(const es_spectrum* s, char** csv);
/* Vertex samples of eigenfunction i with nodal domain labels. */
ES_API es_status es_spectrum_eigenfunction_csv(const es_spectrum* s, int i, char** csv);
ES_API void es_spectrum_free(es_spectrum* s);

/* ---- configurations (key = value text, see README) ---- */
ES_API es_status es_config_create(es_config** out);
/* Later keys replace earlier ones; boundary tag keys accumulate. */
ES_API es_status es_config_set(es_config* c, const char* key, const char* value);
ES_API es_status es_config_merge_file(es_config* c, const char* path);
ES_API es_status es_config_hash(const es_config* c, char** hex);
ES_API void es_config_free(es_config* c);

ES_API es_status es_run_spectrum(const es_config* c, es_spectrum** out);
/* ES_INEQUALITY_FAILED when some counting inequality fails; the report is
 * still written. */
ES_API es_status es_run_montiel_ros(const es_config* c, const char* partition_path, double t, char** json);
ES_API es_status es_run_convergence(const es_config* c, int levels, char** json);

/* Suite: "sphere-table", "k0", "disk", "nodal" or "ledger". ES_MISMATCH
 * when a row fails; json and table are written either way. */
ES_API es_status es_reproduce(const char* suite, char** json, char** table);

#ifdef __cplusplus
}
#endif

#endif
