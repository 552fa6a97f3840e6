#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stratmorse/error.hpp"
#include "stratmorse/homology.hpp"
#include "stratmorse/stratifold.hpp"

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
const StratifoldSpec crosscap3 = make({"c1"}, {{-1, {{"c1", 3}}}});

bool contains(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors) {
    if (e.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("stratifold") {
  TEST_CASE("JSON round trip and strict parsing") {
    const auto s = parse_spec_json(R"({"circles":["c1"],"surfaces":[{"genus":0,"attachments":[{"circle":"c1","degree":3}]}]})");
    CHECK(s == p3);
    CHECK(parse_spec_json(spec_to_json(crosscap22)) == crosscap22);
    CHECK_THROWS_AS(parse_spec_json(R"({"circles":["c1"],"surfaces":[],"extra":1})"), Error);
    CHECK_THROWS_AS(parse_spec_json(R"({"circles":"c1","surfaces":[]})"), Error);
    CHECK_THROWS_AS(parse_spec_json("{"), Error);
  }

  TEST_CASE("validation") {
    CHECK(validate_spec(p3).empty());
    const auto deg2 = validate_spec(make({"c1"}, {{0, {{"c1", 2}}}}));
    REQUIRE(deg2.size() == 1);
    CHECK(contains(deg2, "> 2"));
    CHECK_FALSE(validate_spec(make({"c1"}, {{-1, {{"c1", -3}}}})).empty());
    CHECK_FALSE(validate_spec(make({"c1"}, {{0, {{"c9", 3}}}})).empty());
    CHECK_FALSE(validate_spec(make({"c1"}, {{0, {{"c1", 0}}}})).empty());
    CHECK_FALSE(validate_spec(make({"c1", "c1"}, {{0, {{"c1", 3}}}})).empty());
    // two components
    CHECK_FALSE(validate_spec(make({"a", "b"}, {{0, {{"a", 3}}}, {0, {{"b", 3}}}})).empty());
    CHECK_THROWS_AS(require_valid(make({"c1"}, {{0, {{"c1", 2}}}})), Error);
  }

  TEST_CASE("graph") {
    const auto fig = make({"c1", "c2"}, {{2, {{"c1", 2}, {"c2", 3}}}, {2, {{"c1", 2}, {"c2", -2}}}, {-1, {{"c1", 2}}}});
    CHECK(validate_spec(fig).empty());
    const auto g = build_graph(fig);
    CHECK(g.white_genus.size() == 3);
    CHECK(g.black.size() == 2);
    CHECK(g.edges.size() == 5);

    const auto gp = build_graph(p3);
    REQUIRE(gp.edges.size() == 1);
    CHECK(gp.white_genus == std::vector<std::int64_t>{0});
    CHECK(gp.edges[0].weight == 3);

    const auto g2 = build_graph(two_disks);
    CHECK(g2.white_genus.size() == 2);
    CHECK(g2.black.size() == 1);
    CHECK(g2.edges[0].weight == 2);
    CHECK(g2.edges[1].weight == 3);
  }

  TEST_CASE("twisted") {
    CHECK(is_twisted(p3));
    CHECK_FALSE(is_twisted(make({"c1"}, {{0, {{"c1", 1}, {"c1", 1}}}})));
    CHECK(is_twisted(make({"c1"}, {{0, {{"c1", 2}, {"c1", -3}, {"c1", 4}}}})));
  }

  TEST_CASE("classification") {
    const auto t = classify(p3);
    CHECK(t.kind == StratifoldKind::Type1);
    CHECK(t.witness_prime == 3u);
    CHECK(classify(two_disks).kind == StratifoldKind::Type2);
    CHECK(classify(crosscap22).kind == StratifoldKind::Type3);
    CHECK(classify(crosscap22).witness_prime == 2u);
    CHECK(classify(crosscap3).kind == StratifoldKind::Type4);
    CHECK(classify(make({"c1"}, {{0, {{"c1", 1}, {"c1", 2}}}})).kind == StratifoldKind::NotTwisted);
    // sums cancel: gcd 0, witness 2
    const auto zero = classify(make({"c1"}, {{0, {{"c1", 2}, {"c1", -2}}}}));
    CHECK(zero.kind == StratifoldKind::Type1);
    CHECK(zero.gcd == 0);
    CHECK(zero.witness_prime == 2u);
    const auto six = classify(make({"c1"}, {{0, {{"c1", 6}}}, {1, {{"c1", 12}}}}));
    CHECK(six.gcd == 6);
    CHECK(six.prime_factors == std::vector<std::uint64_t>{2, 3});
    CHECK(six.witness_prime == 2u);
  }

  TEST_CASE("Euler characteristic and predicted vectors") {
    CHECK(euler_from_spec(p3) == 1);
    CHECK(euler_from_spec(two_disks) == 2);
    CHECK(euler_from_spec(crosscap22) == -1);
    CHECK(predicted_morse_vector(p3) == MorseVector{1, 1, 1});
    CHECK(predicted_morse_vector(two_disks) == MorseVector{1, 1, 2});
    CHECK(predicted_morse_vector(crosscap22) == MorseVector{1, 3, 1});
  }

  TEST_CASE("random specs: classification, sign flips and CW homology") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      const auto spec = oracle::random_spec(rng);
      CAPTURE(spec_to_json(spec));
      REQUIRE(validate_spec(spec).empty());
      CHECK(is_twisted(spec));
      const auto t = classify(spec);

      auto flipped = spec;
      for (auto& s : flipped.surfaces) {
        if (!s.orientable()) continue;
        for (auto& a : s.attachments) a.degree = -a.degree;
      }
      CHECK(classify(flipped).kind == t.kind);
      CHECK(classify(flipped).witness_prime == t.witness_prime);

      const auto m = predicted_morse_vector(spec);
      CHECK(m.euler() == euler_from_spec(spec));
      CHECK(m.m2 == static_cast<std::int64_t>(spec.surfaces.size()));

      const auto cw = cw_chain_matrices(spec);
      CHECK(product_is_zero(cw.d1, cw.d2));
      const auto n = static_cast<std::int64_t>(spec.surfaces.size());
      for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto b = cw_betti(spec, Coefficients::prime_field(p));
        CHECK(b.euler() == euler_from_spec(spec));
        CHECK(b[0] == 1);
        CHECK(b[2] <= n);
      }
      const bool perfect_type = t.kind == StratifoldKind::Type1 || t.kind == StratifoldKind::Type3;
      if (perfect_type) {
        const auto b = cw_betti(spec, Coefficients::prime_field(*t.witness_prime));
        CHECK(b.b == std::array<std::int64_t, 3>{m.m0, m.m1, m.m2});
      }
    }
  }
}
