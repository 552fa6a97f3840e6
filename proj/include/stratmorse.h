/* C interface to the stratmorse library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every function returns an sm_status; on failure sm_last_error() describes
 * the problem (per thread, valid until the next call on that thread).
 * Strings returned through char** are owned by the caller and released with
 * sm_string_free.
 */
#ifndef STRATMORSE_H
#define STRATMORSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SM_API __declspec(dllexport)
#else
#define SM_API __attribute__((visibility("default")))
#endif

typedef enum sm_status {
  SM_OK = 0,
  SM_ERR_PARSE = 1,
  SM_ERR_VALIDATION = 2,
  SM_ERR_INVARIANT = 3,
  SM_ERR_ARGUMENT = 4,
  /* The oracle ran out of nodes; its output holds the best field found. */
  SM_ERR_BUDGET = 5,
  SM_ERR_IO = 6,
  SM_ERR_INTERNAL = 7
} sm_status;

typedef struct sm_spec sm_spec;
typedef struct sm_mesh sm_mesh;
typedef struct sm_field sm_field;

typedef enum sm_boundary_reading { SM_READING_POLYGON = 0, SM_READING_CIRCLES = 1 } sm_boundary_reading;

typedef struct sm_options {
  /* "id=L,id=L"; circles not listed get 3 edges. NULL or "" for defaults. */
  const char* circle_lengths;
  int fineness;
  int chords;
  /* Comma separated, e.g. "Q,Z,F2,F3,F5". NULL for that default. */
  const char* coefficients;
  uint64_t oracle_budget;
  size_t oracle_max_cells;
  sm_boundary_reading reading;
  int has_seed;
  uint64_t seed;
} sm_options;

SM_API void sm_options_init(sm_options* options);

SM_API const char* sm_last_error(void);
SM_API const char* sm_status_name(sm_status status);
SM_API void sm_string_free(char* s);

/* specs */
SM_API sm_status sm_spec_parse(const char* json, sm_spec** out);
SM_API sm_status sm_spec_load(const char* path, sm_spec** out);
SM_API void sm_spec_free(sm_spec* spec);
/* Validation, G(X), classification, Euler characteristic, predicted m and
 * the cellular homology table, as JSON. SM_ERR_VALIDATION for invalid specs. */
SM_API sm_status sm_analyze(const sm_spec* spec, const sm_options* options, char** json_out);

/* meshes */
SM_API sm_status sm_triangulate(const sm_spec* spec, const sm_options* options, sm_mesh** out);
/* annotation_path may be NULL for a bare complex (homology and oracle only). */
SM_API sm_status sm_mesh_load(const char* mesh_path, const char* annotation_path, sm_mesh** out);
SM_API sm_status sm_mesh_parse(const char* mesh_text, const char* annotation_text, sm_mesh** out);
SM_API void sm_mesh_free(sm_mesh* mesh);
SM_API int sm_mesh_is_annotated(const sm_mesh* mesh);
SM_API sm_status sm_mesh_counts(const sm_mesh* mesh, size_t counts[3]);
SM_API sm_status sm_mesh_text(const sm_mesh* mesh, char** out);
SM_API sm_status sm_mesh_annotations(const sm_mesh* mesh, char** out);
SM_API sm_status sm_homology(const sm_mesh* mesh, const sm_options* options, char** json_out);

/* fields */
SM_API sm_status sm_optimize(const sm_mesh* mesh, const sm_options* options, sm_field** out);
SM_API void sm_field_free(sm_field* field);
SM_API sm_status sm_field_counts(const sm_field* field, int64_t m[3]);
SM_API sm_status sm_field_text(const sm_field* field, char** out);
/* Report for a field of sm_optimize. spec may be NULL. Returns
 * SM_ERR_INVARIANT (with the report still written) when a cross-check fails. */
SM_API sm_status sm_field_report(const sm_field* field, const sm_spec* spec, const sm_options* options,
                                 char** json_out);

/* oracle; SM_ERR_BUDGET when the search stopped early */
SM_API sm_status sm_oracle(const sm_mesh* mesh, const sm_options* options, char** json_out);

/* Full pipeline on a spec. Returns SM_ERR_INVARIANT when the report lists
 * violations. mesh_out and field_out may be NULL. */
SM_API sm_status sm_verify(const sm_spec* spec, const sm_options* options, char** json_out, sm_mesh** mesh_out,
                           sm_field** field_out);

/* Fineness sweep 0..max_fineness; SM_ERR_INVARIANT when growth is not linear. */
SM_API sm_status sm_bench(const sm_spec* spec, const sm_options* options, int max_fineness, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* STRATMORSE_H */
