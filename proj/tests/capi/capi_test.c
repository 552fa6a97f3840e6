/* Exercises the C interface from plain C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "stratmorse.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

static const char* P3 =
    "{\"circles\":[\"c1\"],\"surfaces\":[{\"genus\":0,\"attachments\":[{\"circle\":\"c1\",\"degree\":3}]}]}";
static const char* BAD =
    "{\"circles\":[\"c1\"],\"surfaces\":[{\"genus\":0,\"attachments\":[{\"circle\":\"c1\",\"degree\":2}]}]}";

static void test_specs(void) {
  sm_spec* spec = NULL;
  char* json = NULL;
  sm_options o;
  sm_options_init(&o);
  EXPECT(sm_spec_parse(P3, &spec) == SM_OK);
  EXPECT(sm_analyze(spec, &o, &json) == SM_OK);
  EXPECT(json && strstr(json, "\"Type1\""));
  sm_string_free(json);
  sm_spec_free(spec);

  spec = NULL;
  EXPECT(sm_spec_parse("{\"circles\":", &spec) == SM_ERR_PARSE);
  EXPECT(spec == NULL);
  EXPECT(strlen(sm_last_error()) > 0);

  EXPECT(sm_spec_parse(BAD, &spec) == SM_OK);
  json = NULL;
  EXPECT(sm_analyze(spec, &o, &json) == SM_ERR_VALIDATION);
  EXPECT(json == NULL);
  EXPECT(strstr(sm_last_error(), "> 2") != NULL);
  sm_spec_free(spec);

  EXPECT(sm_spec_load("/nonexistent/spec.json", &spec) == SM_ERR_IO);
  EXPECT(strcmp(sm_status_name(SM_ERR_BUDGET), "") != 0);
}

static void test_pipeline(void) {
  sm_spec* spec = NULL;
  sm_mesh* mesh = NULL;
  sm_field* field = NULL;
  char *json = NULL, *text = NULL, *ann = NULL;
  size_t counts[3];
  int64_t m[3];
  sm_options o;
  sm_options_init(&o);
  o.chords = 1;
  EXPECT(sm_spec_parse(P3, &spec) == SM_OK);
  EXPECT(sm_triangulate(spec, &o, &mesh) == SM_OK);
  EXPECT(sm_mesh_is_annotated(mesh));
  EXPECT(sm_mesh_counts(mesh, counts) == SM_OK);
  EXPECT((long long)counts[0] - (long long)counts[1] + (long long)counts[2] == 1);
  EXPECT(sm_optimize(mesh, &o, &field) == SM_OK);
  EXPECT(sm_field_counts(field, m) == SM_OK);
  EXPECT(m[0] == 1 && m[1] == 1 && m[2] == 1);
  EXPECT(sm_field_report(field, spec, &o, &json) == SM_OK);
  EXPECT(json && strstr(json, "\"F3\""));
  sm_string_free(json);

  /* the exported mesh re-imports to the same field */
  EXPECT(sm_mesh_text(mesh, &text) == SM_OK);
  EXPECT(sm_mesh_annotations(mesh, &ann) == SM_OK);
  {
    sm_mesh* again = NULL;
    sm_field* f2 = NULL;
    char *t1 = NULL, *t2 = NULL;
    EXPECT(sm_mesh_parse(text, ann, &again) == SM_OK);
    EXPECT(sm_optimize(again, &o, &f2) == SM_OK);
    EXPECT(sm_field_text(field, &t1) == SM_OK);
    EXPECT(sm_field_text(f2, &t2) == SM_OK);
    EXPECT(t1 && t2 && strcmp(t1, t2) == 0);
    sm_string_free(t1);
    sm_string_free(t2);
    sm_field_free(f2);
    sm_mesh_free(again);
  }
  {
    sm_mesh* bare = NULL;
    sm_field* f3 = NULL;
    EXPECT(sm_mesh_parse(text, NULL, &bare) == SM_OK);
    EXPECT(!sm_mesh_is_annotated(bare));
    EXPECT(sm_optimize(bare, &o, &f3) == SM_ERR_ARGUMENT);
    json = NULL;
    EXPECT(sm_homology(bare, &o, &json) == SM_OK);
    EXPECT(json && strstr(json, "\"torsion\""));
    sm_string_free(json);
    sm_mesh_free(bare);
  }
  sm_string_free(text);
  sm_string_free(ann);
  sm_field_free(field);
  sm_mesh_free(mesh);

  json = NULL;
  mesh = NULL;
  field = NULL;
  EXPECT(sm_verify(spec, &o, &json, &mesh, &field) == SM_OK);
  EXPECT(json && strstr(json, "\"ok\": true"));
  EXPECT(mesh != NULL && field != NULL);
  sm_string_free(json);
  sm_field_free(field);
  sm_mesh_free(mesh);
  sm_spec_free(spec);
}

static void test_oracle(void) {
  sm_mesh* mesh = NULL;
  char* json = NULL;
  sm_options o;
  sm_options_init(&o);
  EXPECT(sm_mesh_load(FIXTURE_DIR "/twodisk_small.mesh", NULL, &mesh) == SM_OK);
  EXPECT(sm_oracle(mesh, &o, &json) == SM_OK);
  EXPECT(json && strstr(json, "\"minimum\": 4"));
  sm_string_free(json);
  json = NULL;
  o.oracle_budget = 1;
  EXPECT(sm_oracle(mesh, &o, &json) == SM_ERR_BUDGET);
  EXPECT(json != NULL);
  sm_string_free(json);
  sm_mesh_free(mesh);

  EXPECT(sm_mesh_load(FIXTURE_DIR "/p3_small.mesh", FIXTURE_DIR "/twodisk_small.ann", &mesh) == SM_ERR_VALIDATION);
  EXPECT(sm_optimize(NULL, &o, NULL) == SM_ERR_ARGUMENT);
}

int main(void) {
  test_specs();
  test_pipeline();
  test_oracle();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("C API: all checks passed\n");
  return 0;
}
