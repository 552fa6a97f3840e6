#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "oracles.hpp"
#include "stratmorse/error.hpp"
#include "stratmorse/optimizer.hpp"

using namespace stratmorse;

namespace {

StratifoldSpec make(std::vector<std::string> circles, std::vector<SurfaceSpec> surfaces) {
  StratifoldSpec s;
  s.circles = std::move(circles);
  s.surfaces = std::move(surfaces);
  return s;
}

const StratifoldSpec p3 = make({"c1"}, {{0, {{"c1", 3}}}});
const StratifoldSpec two_disks = make({"c1"}, {{0, {{"c1", 2}}}, {0, {{"c1", 3}}}});
const StratifoldSpec crosscap22 = make({"c1"}, {{-1, {{"c1", 2}, {"c1", 2}}}});

bool has(const std::vector<Coefficients>& v, const Coefficients& c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

// Edges of the vertex trees: non-boundary edges matched with a vertex.
std::vector<char> tree_edges(const StratifoldMesh& sm, const DiscreteVectorField& v) {
  std::vector<char> out(sm.mesh.num_edges(), 0);
  for (const auto& [lo, hi] : v.pairs) {
    if (lo.dim == 0 && sm.edge_roles[hi.index] != EdgeRole::Boundary) out[hi.index] = 1;
  }
  return out;
}

// Faces of the polygon joined across edges that are neither boundary, crossing
// nor tree edges; true when that face graph is connected.
bool complement_connected(const StratifoldMesh& sm, const SubPolygon& p, const std::vector<char>& tree) {
  std::set<Index> faces(p.faces.begin(), p.faces.end()), seen{p.faces.front()};
  std::vector<Index> stack{p.faces.front()};
  while (!stack.empty()) {
    const Index t = stack.back();
    stack.pop_back();
    for (Index e : sm.mesh.triangle_edges(t)) {
      const auto role = sm.edge_roles[e];
      if (tree[e] || role == EdgeRole::Boundary || role == EdgeRole::Crossing) continue;
      for (Index u : sm.mesh.edge_cofacets(e)) {
        if (faces.count(u) && seen.insert(u).second) stack.push_back(u);
      }
    }
  }
  return seen.size() == faces.size();
}

void check_field(const StratifoldMesh& sm, const StratifoldSpec& spec, const GradientResult& g) {
  CHECK(is_matching(g.field, sm.mesh));
  CHECK_FALSE(find_closed_vpath(g.field, sm.mesh));
  CHECK(g.m == predicted_morse_vector(spec));
  CHECK(critical_cells(g.field, sm.mesh).counts == g.m);
  auto want = g.field;
  want.normalize();
  CHECK(gradient_of(induce_dmf_values(g.field, sm.mesh), sm.mesh) == want);
  CHECK(is_dmf(induce_dmf_values(g.field, sm.mesh), sm.mesh));
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("disk, two disks and crosscap") {
    for (const auto& [spec, m] : {std::pair{p3, MorseVector{1, 1, 1}}, std::pair{two_disks, MorseVector{1, 1, 2}},
                                  std::pair{crosscap22, MorseVector{1, 3, 1}}}) {
      const auto t = triangulate_spec(spec);
      const auto g = optimal_gradient(t.mesh);
      CHECK(g.m == m);
      CHECK_FALSE(g.repair);
      CHECK(g.reading == BoundaryReading::Polygon);
      CHECK(g.steps > 0);
      check_field(t.mesh, spec, g);
    }
  }

  TEST_CASE("dual graphs are spanning trees and K minus T stays connected") {
    TriangulateOptions o;
    o.chords = 2;
    for (const auto& spec : {p3, two_disks, crosscap22}) {
      const auto t = triangulate_spec(spec, o);
      const auto g = optimal_gradient(t.mesh);
      const auto tree = tree_edges(t.mesh, g.field);
      std::size_t polygons = 0;
      for (Index s = 0; s < static_cast<Index>(spec.surfaces.size()); ++s) {
        const auto polys = decompose_polygons(t.mesh, s);
        polygons += polys.size();
        CHECK(g.polygons_per_surface[s] == polys.size());
        for (const auto& p : polys) {
          const auto d = dual_graph(t.mesh, p, tree);
          CHECK(d.faces.size() == p.faces.size());
          CHECK(d.arcs.size() + 1 == d.faces.size());
          CHECK(d.connected());
          CHECK(d.is_tree());
          CHECK(complement_connected(t.mesh, p, tree));
        }
      }
      CHECK(polygons == spec.surfaces.size() + 2);
    }
  }

  TEST_CASE("random corpus") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      const auto spec = oracle::random_spec(rng);
      CAPTURE(spec_to_json(spec));
      TriangulateOptions o;
      o.chords = trial % 3;
      const auto t = triangulate_spec(spec, o);
      const auto g = optimal_gradient(t.mesh);
      CHECK_FALSE(g.repair);
      check_field(t.mesh, spec, g);
      const auto r = verify_report(g, t.mesh, &spec, default_coefficients());
      CHECK(r.violations.empty());
      CHECK(r.optimal == Optimality::TwistedTheorem);
      for (const auto& c : r.checks) CHECK(c.holds);
    }
  }

  TEST_CASE("circles reading") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      const auto spec = oracle::random_spec(rng);
      const auto t = triangulate_spec(spec);
      const auto g = optimal_gradient(t.mesh, BoundaryReading::Circles);
      CHECK(g.reading == BoundaryReading::Circles);
      CHECK(g.m.m0 == 1);
      CHECK(is_matching(g.field, t.mesh.mesh));
      CHECK_FALSE(find_closed_vpath(g.field, t.mesh.mesh));
      CHECK(g.m.euler() == euler_from_spec(spec));
    }
  }

  TEST_CASE("deterministic") {
    TriangulateOptions o;
    o.chords = 3;
    const auto t = triangulate_spec(two_disks, o);
    const auto a = optimal_gradient(t.mesh), b = optimal_gradient(t.mesh);
    CHECK(a.field == b.field);
    CHECK(a.critical == b.critical);
    CHECK(a.steps == b.steps);
  }

  TEST_CASE("reports") {
    const auto t = triangulate_spec(p3);
    const auto g = optimal_gradient(t.mesh);
    const auto r = verify_report(g, t.mesh, &p3, default_coefficients());
    REQUIRE(r.type);
    CHECK(r.type->kind == StratifoldKind::Type1);
    CHECK(r.perfect == std::vector<Coefficients>{Coefficients::prime_field(3)});
    CHECK(r.optimal == Optimality::TwistedTheorem);
    CHECK(r.violations.empty());

    const auto t2 = triangulate_spec(two_disks);
    const auto r2 = verify_report(optimal_gradient(t2.mesh), t2.mesh, &two_disks, default_coefficients());
    CHECK(r2.perfect.empty());
    CHECK(r2.optimal == Optimality::TwistedTheorem);

    const auto cc = triangulate_spec(crosscap22);
    const auto r3 = verify_report(optimal_gradient(cc.mesh), cc.mesh, &crosscap22, default_coefficients());
    CHECK(has(r3.perfect, Coefficients::prime_field(2)));

    const auto loose = make({"c1"}, {{0, {{"c1", 1}}}, {0, {{"c1", 1}}}, {0, {{"c1", 1}}}});
    const auto tl = triangulate_spec(loose);
    const auto rl = verify_report(optimal_gradient(tl.mesh), tl.mesh, &loose, default_coefficients());
    CHECK(rl.type->kind == StratifoldKind::NotTwisted);
    CHECK(rl.optimal == Optimality::Unknown);

    const auto none = verify_report(g, t.mesh, nullptr, default_coefficients());
    CHECK_FALSE(none.type);
    CHECK(none.violations.empty());

    try {
      verify_report(g, t.mesh, &two_disks, default_coefficients());
      FAIL("expected MismatchedSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MismatchedSpec);
    }
  }

  TEST_CASE("hand-built fixtures") {
    const std::string dir = FIXTURE_DIR;
    for (const auto& [name, m] : {std::pair{"p3_small", MorseVector{1, 1, 1}}, std::pair{"rp2_pair", MorseVector{1, 1, 2}},
                                  std::pair{"twodisk_small", MorseVector{1, 1, 2}}}) {
      CAPTURE(name);
      const auto sm = import_mesh_files(dir + "/" + name + ".mesh", dir + "/" + name + ".ann");
      const auto g = optimal_gradient(sm);
      CHECK(g.m == m);
      CHECK(oracle::is_acyclic_matching(g.field, sm.mesh));
    }
  }
}
