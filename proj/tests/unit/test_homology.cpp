#include <doctest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "stratmorse/error.hpp"
#include "stratmorse/homology.hpp"
#include "stratmorse/stratifold.hpp"

using namespace stratmorse;

namespace {

nlohmann::json load_json(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

SimplicialComplex2 load_mesh(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(in);
  return read_mesh(in);
}

std::vector<std::int64_t> as_ints(const std::vector<BigInt>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(static_cast<std::int64_t>(x));
  return out;
}

StratifoldSpec one_surface(std::int64_t genus, std::vector<std::int64_t> degrees) {
  StratifoldSpec s;
  s.circles = {"c1"};
  SurfaceSpec m{genus, {}};
  for (auto d : degrees) m.attachments.push_back({"c1", d});
  s.surfaces.push_back(m);
  return s;
}

SimplicialComplex2 random_complex(std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(3, 7)(rng);
  std::vector<std::vector<Index>> simplices;
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int faces = std::uniform_int_distribution<int>(0, 10)(rng);
  for (int i = 0; i < faces; ++i) {
    int a = pick(rng), b = pick(rng), c = pick(rng);
    if (a != b && b != c && a != c) simplices.push_back({a, b, c});
  }
  for (int i = 0; i < 4; ++i) {
    int a = pick(rng), b = pick(rng);
    if (a != b) simplices.push_back({a, b});
  }
  simplices.push_back({0});
  return build_complex(simplices);
}

}  // namespace

TEST_SUITE("homology") {
  TEST_CASE("coefficients") {
    CHECK(Coefficients::parse("F3") == Coefficients::prime_field(3));
    CHECK(Coefficients::parse("Q") == Coefficients::rationals());
    CHECK(Coefficients::parse_list("Q,Z,F2").size() == 3);
    CHECK_THROWS_AS(Coefficients::prime_field(4), Error);
    CHECK_THROWS_AS(Coefficients::parse("F9"), Error);
    CHECK_THROWS_AS(Coefficients::parse("R"), Error);
  }

  TEST_CASE("Smith normal form") {
    auto id = smith_normal_form(IntMatrix::from_dense({{1, 0}, {0, 1}}));
    CHECK(id.rank == 2);
    CHECK(as_ints(id.divisors) == std::vector<std::int64_t>{1, 1});

    auto zero = smith_normal_form(IntMatrix::from_dense({{0, 0}, {0, 0}}));
    CHECK(zero.rank == 0);
    CHECK(zero.divisors.empty());

    auto d = smith_normal_form(IntMatrix::from_dense({{2, 0}, {0, 3}}));
    CHECK(d.rank == 2);
    CHECK(as_ints(d.divisors) == std::vector<std::int64_t>{1, 6});

    // Intermediate products overflow 64 bits.
    const std::int64_t big = std::int64_t{1} << 40;
    auto wide = smith_normal_form(IntMatrix::from_dense({{big + 1, big}, {big, big - 1}}));
    CHECK(wide.rank == 2);
    CHECK(as_ints(wide.divisors) == std::vector<std::int64_t>{1, 1});
  }

  TEST_CASE("Smith normal form against dense ranks") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
      const int r = std::uniform_int_distribution<int>(1, 6)(rng), c = std::uniform_int_distribution<int>(1, 6)(rng);
      std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(c));
      for (auto& row : m) {
        for (auto& x : row) x = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? std::uniform_int_distribution<int>(-4, 4)(rng) : 0;
      }
      const auto im = IntMatrix::from_dense(m);
      CHECK(im.to_dense() == m);
      const auto s = smith_normal_form(im);
      CHECK(s.rank == oracle::dense_rank(m, 0));
      for (std::size_t i = 0; i + 1 < s.divisors.size(); ++i) CHECK(s.divisors[i + 1] % s.divisors[i] == 0);
      for (std::uint32_t p : {2u, 3u, 5u}) {
        CHECK(rank_mod_p(im, p) == oracle::dense_rank(m, p));
        std::size_t coprime = 0;
        for (const auto& x : s.divisors) coprime += (x % p != 0);
        CHECK(rank_mod_p(im, p) == coprime);
      }
    }
  }

  TEST_CASE("simplicial boundary matrices") {
    const auto tri = build_complex({{0, 1, 2}});
    const auto m = boundary_matrices(tri);
    CHECK(m.d2.to_dense() == std::vector<std::vector<std::int64_t>>{{1}, {-1}, {1}});
    CHECK(product_is_zero(m.d1, m.d2));
    CHECK(boundary_matrices(build_complex({{0, 1}})).d1.to_dense() ==
          std::vector<std::vector<std::int64_t>>{{-1}, {1}});
  }

  TEST_CASE("Betti numbers of small complexes") {
    CHECK(betti(oracle::tetrahedron_boundary(), Coefficients::rationals()).b == std::array<std::int64_t, 3>{1, 0, 1});
    const auto rp2 = oracle::rp2_6();
    CHECK(betti(rp2, Coefficients::prime_field(2)).b == std::array<std::int64_t, 3>{1, 1, 1});
    CHECK(betti(rp2, Coefficients::rationals()).b == std::array<std::int64_t, 3>{1, 0, 0});
    const auto z = betti(rp2, Coefficients::integers());
    CHECK(z.b == std::array<std::int64_t, 3>{1, 0, 0});
    CHECK(as_ints(z.torsion) == std::vector<std::int64_t>{2});
    CHECK(betti(build_complex({{0}, {1}}), Coefficients::rationals())[0] == 2);
  }

  TEST_CASE("Betti numbers against dense elimination") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 80; ++trial) {
      const auto k = random_complex(rng);
      CHECK(product_is_zero(boundary_matrices(k).d1, boundary_matrices(k).d2));
      const auto q = betti(k, Coefficients::rationals());
      CHECK(q.b == oracle::betti(k, 0));
      CHECK(betti(k, Coefficients::integers()).b == q.b);
      CHECK(q.euler() == euler_characteristic(k));
      for (std::uint32_t p : {2u, 3u, 5u}) CHECK(betti(k, Coefficients::prime_field(p)).b == oracle::betti(k, p));
    }
  }

  TEST_CASE("committed fixture matrices") {
    for (const std::string name : {"rp2_6", "torus_7", "klein_9"}) {
      CAPTURE(name);
      const auto want = load_json(name + ".homology.json");
      const auto k = load_mesh(name + ".mesh");
      const auto m = boundary_matrices(k);
      CHECK(m.d1.to_dense() == want["d1"].get<std::vector<std::vector<std::int64_t>>>());
      CHECK(m.d2.to_dense() == want["d2"].get<std::vector<std::vector<std::int64_t>>>());
      CHECK(as_ints(smith_normal_form(m.d1).divisors) == want["snf_d1"].get<std::vector<std::int64_t>>());
      CHECK(as_ints(smith_normal_form(m.d2).divisors) == want["snf_d2"].get<std::vector<std::int64_t>>());
      const auto z = betti(k, Coefficients::integers());
      CHECK(z.b == want["Z"]["betti"].get<std::array<std::int64_t, 3>>());
      CHECK(as_ints(z.torsion) == want["Z"]["torsion"].get<std::vector<std::int64_t>>());
      CHECK(betti(k, Coefficients::rationals()).b == want["Q"].get<std::array<std::int64_t, 3>>());
      for (std::uint32_t p : {2u, 3u, 5u}) {
        CHECK(betti(k, Coefficients::prime_field(p)).b ==
              want["F" + std::to_string(p)].get<std::array<std::int64_t, 3>>());
      }
    }
  }

  TEST_CASE("CW chain complexes") {
    const auto p3 = cw_chain_matrices(one_surface(0, {3}));
    CHECK(p3.d2.to_dense() == std::vector<std::vector<std::int64_t>>{{3}, {0}});
    CHECK(p3.d1.to_dense() == std::vector<std::vector<std::int64_t>>{{0, 1}, {0, -1}});

    const auto cross = cw_chain_matrices(one_surface(-1, {3}));
    CHECK(cross.d2.to_dense() == std::vector<std::vector<std::int64_t>>{{3}, {2}, {0}});

    const auto torus = cw_chain_matrices(one_surface(1, {2}));
    CHECK(torus.d2.to_dense() == std::vector<std::vector<std::int64_t>>{{2}, {0}, {0}, {0}});

    for (const auto& m : {p3, cross, torus}) CHECK(product_is_zero(m.d1, m.d2));
  }

  TEST_CASE("CW Betti numbers") {
    CHECK(cw_betti(one_surface(0, {3}), Coefficients::prime_field(3))[2] == 1);
    StratifoldSpec two;
    two.circles = {"c1"};
    two.surfaces = {{0, {{"c1", 2}}}, {0, {{"c1", 3}}}};
    const auto q = cw_betti(two, Coefficients::rationals());
    CHECK(q[2] == 1);
    CHECK(q.b == std::array<std::int64_t, 3>{1, 0, 1});
    CHECK(q.euler() == euler_from_spec(two));
  }
}
