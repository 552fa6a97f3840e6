// Command-line front end. Talks to the library only through stratmorse.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stratmorse.h"

namespace {

struct Config {
  std::string input;
  std::string annotations;
  std::string spec;
  std::vector<std::string> circle_lengths;
  int fineness = 0;
  int chords = 0;
  int max_fineness = 3;
  std::string coeffs = "Q,Z,F2,F3,F5";
  std::uint64_t oracle_budget = 50'000'000;
  std::size_t oracle_max_cells = 60;
  std::string reading = "polygon";
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct Owned {
  char* p = nullptr;
  ~Owned() { sm_string_free(p); }
};

struct SpecPtr {
  sm_spec* p = nullptr;
  ~SpecPtr() { sm_spec_free(p); }
};

struct MeshPtr {
  sm_mesh* p = nullptr;
  ~MeshPtr() { sm_mesh_free(p); }
};

struct FieldPtr {
  sm_field* p = nullptr;
  ~FieldPtr() { sm_field_free(p); }
};

int exit_code(sm_status s) {
  switch (s) {
    case SM_OK: return 0;
    case SM_ERR_PARSE:
    case SM_ERR_VALIDATION:
    case SM_ERR_ARGUMENT:
    case SM_ERR_IO: return 1;
    case SM_ERR_BUDGET: return 3;
    default: return 2;
  }
}

int report_failure(sm_status s) {
  std::cerr << "error (" << sm_status_name(s) << "): " << sm_last_error() << "\n";
  return exit_code(s);
}

bool write_file(const std::string& dir, const std::string& name, const char* text) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

class Runner {
 public:
  explicit Runner(const Config& c) : c_(c) {
    sm_options_init(&o_);
    for (const auto& l : c.circle_lengths) lengths_ += (lengths_.empty() ? "" : ",") + l;
    o_.circle_lengths = lengths_.c_str();
    o_.fineness = c.fineness;
    o_.chords = c.chords;
    o_.coefficients = c.coeffs.c_str();
    o_.oracle_budget = c.oracle_budget;
    o_.oracle_max_cells = c.oracle_max_cells;
    o_.reading = c.reading == "circles" ? SM_READING_CIRCLES : SM_READING_POLYGON;
    o_.has_seed = c.seed ? 1 : 0;
    o_.seed = c.seed.value_or(0);
  }

  int analyze() {
    SpecPtr spec;
    if (sm_status s = sm_spec_load(c_.input.c_str(), &spec.p); s != SM_OK) return report_failure(s);
    Owned json;
    if (sm_status s = sm_analyze(spec.p, &o_, &json.p); s != SM_OK) return report_failure(s);
    return emit(json.p, "analysis.json");
  }

  int triangulate() {
    SpecPtr spec;
    if (sm_status s = sm_spec_load(c_.input.c_str(), &spec.p); s != SM_OK) return report_failure(s);
    MeshPtr mesh;
    if (sm_status s = sm_triangulate(spec.p, &o_, &mesh.p); s != SM_OK) return report_failure(s);
    const std::string dir = c_.out.empty() ? "." : c_.out;
    if (int rc = write_mesh_files(mesh.p, dir); rc != 0) return rc;
    size_t counts[3];
    sm_mesh_counts(mesh.p, counts);
    std::cout << "wrote " << (std::filesystem::path(dir) / "mesh.txt").string() << " and annotations.txt: V=" << counts[0]
              << " E=" << counts[1] << " F=" << counts[2] << "\n";
    return 0;
  }

  int morse() {
    MeshPtr mesh;
    if (sm_status s = sm_mesh_load(c_.input.c_str(), c_.annotations.c_str(), &mesh.p); s != SM_OK) {
      return report_failure(s);
    }
    SpecPtr spec;
    if (!c_.spec.empty()) {
      if (sm_status s = sm_spec_load(c_.spec.c_str(), &spec.p); s != SM_OK) return report_failure(s);
    }
    FieldPtr field;
    if (sm_status s = sm_optimize(mesh.p, &o_, &field.p); s != SM_OK) return report_failure(s);
    Owned report, text;
    const sm_status rs = sm_field_report(field.p, spec.p, &o_, &report.p);
    if (!report.p) return report_failure(rs);
    if (sm_status s = sm_field_text(field.p, &text.p); s != SM_OK) return report_failure(s);
    if (!c_.out.empty() && !write_file(c_.out, "field.txt", text.p)) return 1;
    if (int rc = emit(report.p, "report.json"); rc != 0) return rc;
    return rs == SM_OK ? 0 : report_failure(rs);
  }

  int homology() {
    MeshPtr mesh;
    if (sm_status s = sm_mesh_load(c_.input.c_str(), nullptr, &mesh.p); s != SM_OK) return report_failure(s);
    Owned json;
    if (sm_status s = sm_homology(mesh.p, &o_, &json.p); s != SM_OK) return report_failure(s);
    return emit(json.p, "homology.json");
  }

  int oracle() {
    MeshPtr mesh;
    if (sm_status s = sm_mesh_load(c_.input.c_str(), nullptr, &mesh.p); s != SM_OK) return report_failure(s);
    Owned json;
    const sm_status s = sm_oracle(mesh.p, &o_, &json.p);
    if (!json.p) return report_failure(s);
    if (int rc = emit(json.p, "oracle.json"); rc != 0) return rc;
    return s == SM_OK ? 0 : report_failure(s);
  }

  int verify() {
    SpecPtr spec;
    if (sm_status s = sm_spec_load(c_.input.c_str(), &spec.p); s != SM_OK) return report_failure(s);
    Owned json;
    MeshPtr mesh;
    FieldPtr field;
    const sm_status s = sm_verify(spec.p, &o_, &json.p, &mesh.p, &field.p);
    if (!json.p) return report_failure(s);
    if (!c_.out.empty()) {
      Owned text;
      if (int rc = write_mesh_files(mesh.p, c_.out); rc != 0) return rc;
      if (sm_status fs = sm_field_text(field.p, &text.p); fs != SM_OK) return report_failure(fs);
      if (!write_file(c_.out, "field.txt", text.p)) return 1;
    }
    if (int rc = emit(json.p, "report.json"); rc != 0) return rc;
    return s == SM_OK ? 0 : report_failure(s);
  }

  int bench() {
    SpecPtr spec;
    if (sm_status s = sm_spec_load(c_.input.c_str(), &spec.p); s != SM_OK) return report_failure(s);
    Owned json;
    const sm_status s = sm_bench(spec.p, &o_, c_.max_fineness, &json.p);
    if (!json.p) return report_failure(s);
    if (int rc = emit(json.p, "bench.json"); rc != 0) return rc;
    return s == SM_OK ? 0 : report_failure(s);
  }

 private:
  int emit(const char* json, const char* name) {
    std::cout << json;
    if (!c_.out.empty() && !write_file(c_.out, name, json)) return 1;
    return 0;
  }

  int write_mesh_files(const sm_mesh* mesh, const std::string& dir) {
    Owned text, annotations;
    if (sm_status s = sm_mesh_text(mesh, &text.p); s != SM_OK) return report_failure(s);
    if (sm_status s = sm_mesh_annotations(mesh, &annotations.p); s != SM_OK) return report_failure(s);
    if (!write_file(dir, "mesh.txt", text.p) || !write_file(dir, "annotations.txt", annotations.p)) return 1;
    return 0;
  }

  const Config& c_;
  sm_options o_;
  std::string lengths_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Morse functions on 2-stratifolds"};
  app.require_subcommand(1);
  Config c;

  auto triangulation_flags = [&](CLI::App* sub) {
    sub->add_option("--circle-length", c.circle_lengths, "Edges of a circle before subdivision, <id>=<L> (default 3)");
    sub->add_option("--fineness", c.fineness, "Extra subdivision rounds")->check(CLI::NonNegativeNumber);
    sub->add_option("--chords", c.chords, "Number of crossing edges to insert")->check(CLI::NonNegativeNumber);
  };
  auto coeff_flag = [&](CLI::App* sub) { sub->add_option("--coeffs", c.coeffs, "Coefficient systems, e.g. Q,Z,F2,F3,F5"); };
  auto oracle_flags = [&](CLI::App* sub) {
    sub->add_option("--oracle-budget", c.oracle_budget, "Node limit for the exact search");
    sub->add_option("--oracle-max-cells", c.oracle_max_cells, "Run the oracle only up to this many cells");
    sub->add_option("--seed", c.seed, "Also run the oracle on a relabelled copy using this seed");
  };
  auto reading_flag = [&](CLI::App* sub) {
    sub->add_option("--boundary-reading", c.reading, "Which cells count as polygon boundary")
        ->check(CLI::IsMember({"polygon", "circles"}));
  };
  auto out_flag = [&](CLI::App* sub) { sub->add_option("--out", c.out, "Directory for output files"); };

  auto* analyze = app.add_subcommand("analyze", "Validate and classify a spec");
  analyze->add_option("spec", c.input, "Spec JSON file")->required();
  coeff_flag(analyze);
  out_flag(analyze);

  auto* triangulate = app.add_subcommand("triangulate", "Write an annotated mesh for a spec");
  triangulate->add_option("spec", c.input, "Spec JSON file")->required();
  triangulation_flags(triangulate);
  out_flag(triangulate);

  auto* morse = app.add_subcommand("morse", "Optimal gradient field on an annotated mesh");
  morse->add_option("mesh", c.input, "Mesh file")->required();
  morse->add_option("--annotations", c.annotations, "Annotation file")->required();
  morse->add_option("--spec", c.spec, "Spec the mesh was built from");
  reading_flag(morse);
  coeff_flag(morse);
  oracle_flags(morse);
  out_flag(morse);

  auto* homology = app.add_subcommand("homology", "Betti numbers and torsion of a mesh");
  homology->add_option("mesh", c.input, "Mesh file")->required();
  coeff_flag(homology);
  out_flag(homology);

  auto* oracle = app.add_subcommand("oracle", "Exact minimum number of critical cells");
  oracle->add_option("mesh", c.input, "Mesh file")->required();
  oracle_flags(oracle);
  out_flag(oracle);

  auto* verify = app.add_subcommand("verify", "Full pipeline with cross-checks");
  verify->add_option("spec", c.input, "Spec JSON file")->required();
  triangulation_flags(verify);
  reading_flag(verify);
  coeff_flag(verify);
  oracle_flags(verify);
  out_flag(verify);

  auto* bench = app.add_subcommand("bench", "Fineness sweep for the linear-time check");
  bench->add_option("spec", c.input, "Spec JSON file")->required();
  bench->add_option("--max-fineness", c.max_fineness, "Largest fineness")->check(CLI::NonNegativeNumber);
  triangulation_flags(bench);
  reading_flag(bench);
  out_flag(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Runner r(c);
  try {
    if (*analyze) return r.analyze();
    if (*triangulate) return r.triangulate();
    if (*morse) return r.morse();
    if (*homology) return r.homology();
    if (*oracle) return r.oracle();
    if (*verify) return r.verify();
    if (*bench) return r.bench();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
