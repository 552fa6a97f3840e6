#pragma once

// Reference computations for the tests. Everything here works from vertex
// lists only, with naive algorithms, so it shares no code paths with the
// library beyond the complex's cell tables.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stratmorse/complex.hpp"
#include "stratmorse/morse.hpp"
#include "stratmorse/stratifold.hpp"

namespace oracle {

using stratmorse::CellRef;
using stratmorse::DiscreteVectorField;
using stratmorse::SimplicialComplex2;

/// Rank of a dense integer matrix over Q (p == 0) or F_p, by plain Gaussian
/// elimination on exact rationals / residues.
std::size_t dense_rank(std::vector<std::vector<std::int64_t>> m, std::uint32_t p);

/// Betti numbers from boundary matrices assembled from vertex lists.
std::array<std::int64_t, 3> betti(const SimplicialComplex2& k, std::uint32_t p);

/// True when V is a matching without closed V-paths, checked by a
/// topological sort of the modified Hasse diagram over all cells.
bool is_acyclic_matching(const DiscreteVectorField& v, const SimplicialComplex2& k);

/// Minimum number of critical cells over all acyclic matchings, by
/// enumerating every matching of the Hasse diagram. Tiny complexes only.
struct BruteForce {
  std::int64_t minimum = 0;
  std::array<std::int64_t, 3> vector{};
  std::uint64_t matchings = 0;
  std::uint64_t acyclic = 0;
};
BruteForce brute_force_min(const SimplicialComplex2& k);

/// Connected random graph on n vertices with roughly `extra` edges beyond a
/// spanning tree, as a 1-dimensional complex.
SimplicialComplex2 random_connected_graph(std::mt19937_64& rng, int n, int extra);

/// Seeded valid specs covering genera -2..2, one to three circles and degrees
/// of absolute value 2..5.
stratmorse::StratifoldSpec random_spec(std::mt19937_64& rng, bool twisted = true);

/// Complexes used across tests.
SimplicialComplex2 triangle_boundary();
SimplicialComplex2 tetrahedron_boundary();
SimplicialComplex2 rp2_6();
SimplicialComplex2 torus_7();

}  // namespace oracle
