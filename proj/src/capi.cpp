#include "stratmorse.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "stratmorse/error.hpp"
#include "stratmorse/pipeline.hpp"

using namespace stratmorse;

struct sm_spec {
  StratifoldSpec spec;
};

struct sm_mesh {
  std::shared_ptr<const SimplicialComplex2> complex;
  // null for a bare complex
  std::shared_ptr<const StratifoldMesh> annotated;
};

struct sm_field {
  std::shared_ptr<const StratifoldMesh> mesh;
  GradientResult gradient;
};

namespace {

thread_local std::string last_error;

sm_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return SM_ERR_PARSE;
    case ErrorCode::InvalidSimplex:
    case ErrorCode::UnknownCell:
    case ErrorCode::NotAMatching:
    case ErrorCode::NotPrime:
    case ErrorCode::InvalidSpec:
    case ErrorCode::CircleTooShort:
    case ErrorCode::InconsistentStructure:
    case ErrorCode::ValidationError:
    case ErrorCode::MismatchedSpec:
      return SM_ERR_VALIDATION;
    case ErrorCode::InvalidArgument:
    case ErrorCode::RootMissing:
      return SM_ERR_ARGUMENT;
    default:
      return SM_ERR_INVARIANT;
  }
}

template <class F>
sm_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SM_ERR_INTERNAL;
  }
}

sm_status fail(sm_status s, const std::string& message) {
  last_error = message;
  return s;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunOptions run_options(const sm_options* o) {
  sm_options defaults;
  sm_options_init(&defaults);
  if (!o) o = &defaults;
  RunOptions r;
  if (o->circle_lengths && *o->circle_lengths) r.triangulation.circle_lengths = parse_circle_lengths(o->circle_lengths);
  if (o->fineness < 0) throw Error(ErrorCode::InvalidArgument, "fineness must be >= 0");
  if (o->chords < 0) throw Error(ErrorCode::InvalidArgument, "chords must be >= 0");
  r.triangulation.fineness = o->fineness;
  r.triangulation.chords = o->chords;
  if (o->coefficients) r.coefficients = Coefficients::parse_list(o->coefficients);
  if (r.coefficients.empty()) throw Error(ErrorCode::InvalidArgument, "no coefficient systems given");
  r.oracle_budget = o->oracle_budget;
  r.oracle_max_cells = o->oracle_max_cells;
  switch (o->reading) {
    case SM_READING_POLYGON: r.reading = BoundaryReading::Polygon; break;
    case SM_READING_CIRCLES: r.reading = BoundaryReading::Circles; break;
    default: throw Error(ErrorCode::InvalidArgument, "unknown boundary reading");
  }
  if (o->has_seed) r.seed = o->seed;
  return r;
}

sm_mesh* wrap(StratifoldMesh sm) {
  auto shared = std::make_shared<const StratifoldMesh>(std::move(sm));
  return new sm_mesh{std::shared_ptr<const SimplicialComplex2>(shared, &shared->mesh), shared};
}

sm_status load_text(const char* path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(SM_ERR_IO, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return SM_OK;
}

}  // namespace

extern "C" {

void sm_options_init(sm_options* options) {
  if (!options) return;
  options->circle_lengths = nullptr;
  options->fineness = 0;
  options->chords = 0;
  options->coefficients = nullptr;
  options->oracle_budget = 50'000'000;
  options->oracle_max_cells = 60;
  options->reading = SM_READING_POLYGON;
  options->has_seed = 0;
  options->seed = 0;
}

const char* sm_last_error(void) { return last_error.c_str(); }

const char* sm_status_name(sm_status status) {
  switch (status) {
    case SM_OK: return "ok";
    case SM_ERR_PARSE: return "parse error";
    case SM_ERR_VALIDATION: return "validation error";
    case SM_ERR_INVARIANT: return "invariant violation";
    case SM_ERR_ARGUMENT: return "invalid argument";
    case SM_ERR_BUDGET: return "budget exhausted";
    case SM_ERR_IO: return "i/o error";
    case SM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sm_string_free(char* s) { std::free(s); }

sm_status sm_spec_parse(const char* json, sm_spec** out) {
  return guarded([&] {
    if (!json || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    *out = new sm_spec{parse_spec_json(json)};
    return SM_OK;
  });
}

sm_status sm_spec_load(const char* path, sm_spec** out) {
  return guarded([&] {
    if (!path || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    std::string text;
    if (sm_status s = load_text(path, text); s != SM_OK) return s;
    *out = new sm_spec{parse_spec_json(text)};
    return SM_OK;
  });
}

void sm_spec_free(sm_spec* spec) { delete spec; }

sm_status sm_analyze(const sm_spec* spec, const sm_options* options, char** json_out) {
  return guarded([&] {
    if (!spec || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    const RunOptions r = run_options(options);
    *json_out = duplicate(dump(analyze_json(spec->spec, r.coefficients)));
    return SM_OK;
  });
}

sm_status sm_triangulate(const sm_spec* spec, const sm_options* options, sm_mesh** out) {
  return guarded([&] {
    if (!spec || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    require_valid(spec->spec);
    const RunOptions r = run_options(options);
    *out = wrap(triangulate_spec(spec->spec, r.triangulation).mesh);
    return SM_OK;
  });
}

sm_status sm_mesh_parse(const char* mesh_text, const char* annotation_text, sm_mesh** out) {
  return guarded([&] {
    if (!mesh_text || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    std::istringstream m(mesh_text);
    if (annotation_text) {
      std::istringstream a(annotation_text);
      *out = wrap(import_mesh(m, a));
    } else {
      *out = new sm_mesh{std::make_shared<const SimplicialComplex2>(read_mesh(m)), nullptr};
    }
    return SM_OK;
  });
}

sm_status sm_mesh_load(const char* mesh_path, const char* annotation_path, sm_mesh** out) {
  return guarded([&] {
    if (!mesh_path || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    std::string mesh, annotations;
    if (sm_status s = load_text(mesh_path, mesh); s != SM_OK) return s;
    if (annotation_path) {
      if (sm_status s = load_text(annotation_path, annotations); s != SM_OK) return s;
    }
    return sm_mesh_parse(mesh.c_str(), annotation_path ? annotations.c_str() : nullptr, out);
  });
}

void sm_mesh_free(sm_mesh* mesh) { delete mesh; }

int sm_mesh_is_annotated(const sm_mesh* mesh) { return mesh && mesh->annotated ? 1 : 0; }

sm_status sm_mesh_counts(const sm_mesh* mesh, size_t counts[3]) {
  return guarded([&] {
    if (!mesh || !counts) return fail(SM_ERR_ARGUMENT, "null argument");
    for (int d = 0; d < 3; ++d) counts[d] = mesh->complex->num_cells(d);
    return SM_OK;
  });
}

sm_status sm_mesh_text(const sm_mesh* mesh, char** out) {
  return guarded([&] {
    if (!mesh || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    std::ostringstream ss;
    write_mesh(ss, *mesh->complex);
    *out = duplicate(ss.str());
    return SM_OK;
  });
}

sm_status sm_mesh_annotations(const sm_mesh* mesh, char** out) {
  return guarded([&] {
    if (!mesh || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    if (!mesh->annotated) return fail(SM_ERR_ARGUMENT, "mesh has no annotations");
    std::ostringstream ss;
    write_annotations(ss, *mesh->annotated);
    *out = duplicate(ss.str());
    return SM_OK;
  });
}

sm_status sm_homology(const sm_mesh* mesh, const sm_options* options, char** json_out) {
  return guarded([&] {
    if (!mesh || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    const RunOptions r = run_options(options);
    *json_out = duplicate(dump(homology_json(*mesh->complex, r.coefficients)));
    return SM_OK;
  });
}

sm_status sm_optimize(const sm_mesh* mesh, const sm_options* options, sm_field** out) {
  return guarded([&] {
    if (!mesh || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    if (!mesh->annotated) return fail(SM_ERR_ARGUMENT, "the optimizer needs an annotated mesh");
    const RunOptions r = run_options(options);
    *out = new sm_field{mesh->annotated, optimal_gradient(*mesh->annotated, r.reading)};
    return SM_OK;
  });
}

void sm_field_free(sm_field* field) { delete field; }

sm_status sm_field_counts(const sm_field* field, int64_t m[3]) {
  return guarded([&] {
    if (!field || !m) return fail(SM_ERR_ARGUMENT, "null argument");
    for (int i = 0; i < 3; ++i) m[i] = field->gradient.m[static_cast<std::size_t>(i)];
    return SM_OK;
  });
}

sm_status sm_field_text(const sm_field* field, char** out) {
  return guarded([&] {
    if (!field || !out) return fail(SM_ERR_ARGUMENT, "null argument");
    std::ostringstream ss;
    write_field(ss, field->gradient.field, field->mesh->mesh);
    *out = duplicate(ss.str());
    return SM_OK;
  });
}

sm_status sm_field_report(const sm_field* field, const sm_spec* spec, const sm_options* options, char** json_out) {
  return guarded([&] {
    if (!field || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    const RunOptions r = run_options(options);
    const StratifoldMesh& sm = *field->mesh;
    std::optional<OracleRun> oracle;
    if (sm.mesh.num_cells() <= r.oracle_max_cells) oracle = run_oracle(sm.mesh, r);
    MorseReport report = verify_report(field->gradient, sm, spec ? &spec->spec : nullptr, r.coefficients,
                                       oracle ? &oracle->result : nullptr);
    nlohmann::json j = report_json(report, field->gradient, sm.mesh);
    j["oracle"] = oracle ? oracle->json : nlohmann::json(nullptr);
    *json_out = duplicate(dump(j));
    if (!report.violations.empty()) return fail(SM_ERR_INVARIANT, report.violations.front());
    return SM_OK;
  });
}

sm_status sm_oracle(const sm_mesh* mesh, const sm_options* options, char** json_out) {
  return guarded([&] {
    if (!mesh || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    const RunOptions r = run_options(options);
    const OracleRun run = run_oracle(*mesh->complex, r);
    *json_out = duplicate(dump(run.json));
    if (!run.result.exhausted || (run.relabelled && !run.relabelled->exhausted)) {
      return fail(SM_ERR_BUDGET, "node budget of " + std::to_string(r.oracle_budget) + " exhausted");
    }
    if (run.relabelled && run.relabelled->minimum != run.result.minimum) {
      return fail(SM_ERR_INVARIANT, "oracle minimum changes under relabelling");
    }
    return SM_OK;
  });
}

sm_status sm_verify(const sm_spec* spec, const sm_options* options, char** json_out, sm_mesh** mesh_out,
                    sm_field** field_out) {
  return guarded([&] {
    if (!spec || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    const RunOptions r = run_options(options);
    VerifyRun run = run_verify(spec->spec, r);
    *json_out = duplicate(dump(run.json));
    sm_mesh* mesh = wrap(std::move(run.triangulation.mesh));
    if (field_out) *field_out = new sm_field{mesh->annotated, std::move(run.gradient)};
    if (mesh_out) {
      *mesh_out = mesh;
    } else {
      delete mesh;
    }
    if (!run.report.violations.empty()) return fail(SM_ERR_INVARIANT, run.report.violations.front());
    return SM_OK;
  });
}

sm_status sm_bench(const sm_spec* spec, const sm_options* options, int max_fineness, char** json_out) {
  return guarded([&] {
    if (!spec || !json_out) return fail(SM_ERR_ARGUMENT, "null argument");
    if (max_fineness < 0) return fail(SM_ERR_ARGUMENT, "max fineness must be >= 0");
    const RunOptions r = run_options(options);
    const BenchRun run = run_bench(spec->spec, r, max_fineness);
    *json_out = duplicate(dump(run.json));
    if (!run.steps_linear || !run.time_linear) return fail(SM_ERR_INVARIANT, "growth exceeds 1.5x the cell ratio");
    return SM_OK;
  });
}

}  // extern "C"
