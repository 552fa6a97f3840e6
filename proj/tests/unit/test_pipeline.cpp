#include <doctest.h>

#include "stratmorse/error.hpp"
#include "stratmorse/pipeline.hpp"

using namespace stratmorse;

namespace {

const std::string fixtures = FIXTURE_DIR;

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("circle length flags") {
    const auto m = parse_circle_lengths("a=4,b=7");
    CHECK(m.at("a") == 4);
    CHECK(m.at("b") == 7);
    CHECK(parse_circle_lengths("").empty());
    CHECK_THROWS_AS(parse_circle_lengths("a"), Error);
    CHECK_THROWS_AS(parse_circle_lengths("a=x"), Error);
    CHECK_THROWS_AS(parse_circle_lengths("a=3,a=4"), Error);
  }

  TEST_CASE("analysis") {
    const auto j = analyze_json(load_spec(fixtures + "/twodisks.json"), default_coefficients());
    CHECK(j["type"] == "Type2");
    CHECK(j["predicted_m"] == nlohmann::json::array({1, 1, 2}));
    CHECK(j["cw_homology"][0]["coefficients"] == "Q");
    CHECK(j["cw_homology"][0]["betti"] == nlohmann::json::array({1, 0, 1}));
    CHECK_THROWS_AS(analyze_json(parse_spec_json(R"({"circles":["c"],"surfaces":[{"genus":0,"attachments":[{"circle":"c","degree":2}]}]})"),
                                 default_coefficients()),
                    Error);
  }

  TEST_CASE("verify is deterministic and clean") {
    const auto spec = load_spec(fixtures + "/p3.json");
    RunOptions o;
    o.triangulation.chords = 1;
    const auto a = run_verify(spec, o), b = run_verify(spec, o);
    CHECK(a.json.dump() == b.json.dump());
    CHECK(a.json["ok"] == true);
    CHECK(a.report.violations.empty());
    CHECK(a.json["report"]["m"] == nlohmann::json::array({1, 1, 1}));
    CHECK(a.json["report"]["perfect"] == nlohmann::json::array({"F3"}));
  }

  TEST_CASE("morse on a small fixture consults the oracle") {
    const auto sm = import_mesh_files(fixtures + "/twodisk_small.mesh", fixtures + "/twodisk_small.ann");
    const auto spec = load_spec(fixtures + "/twodisks.json");
    RunOptions o;
    o.oracle_max_cells = 100;
    o.seed = 42;
    const auto r = run_morse(sm, &spec, o);
    REQUIRE(r.oracle);
    CHECK(r.oracle->result.exhausted);
    CHECK(r.oracle->result.minimum == r.gradient.m.total());
    REQUIRE(r.oracle->relabelled);
    CHECK(r.oracle->relabelled->minimum == r.oracle->result.minimum);
    CHECK(r.report.violations.empty());
    CHECK(r.json["ok"] == true);
    CHECK(r.json.dump() == run_morse(sm, &spec, o).json.dump());

    o.oracle_max_cells = 10;
    CHECK(run_morse(sm, &spec, o).json["oracle"].contains("skipped"));
  }

  TEST_CASE("bench sweep") {
    RunOptions o;
    const auto b = run_bench(load_spec(fixtures + "/p3.json"), o, 1);
    REQUIRE(b.points.size() == 2);
    CHECK(b.points[1].cells > b.points[0].cells);
    CHECK(b.steps_linear);
    CHECK(b.json.contains("points"));
  }
}
