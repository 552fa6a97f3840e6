#pragma once

// Exact minimum number of critical cells over all discrete gradients on a
// small 2-complex.
//
// For a 2-complex the minimum equals 2 * (b0 + k) - chi, where k is the least
// number of faces whose removal leaves a complex that collapses onto a graph.
// The search therefore runs over face sets, pruned from below by b2 over F2.

#include <cstdint>

#include "stratmorse/complex.hpp"
#include "stratmorse/morse.hpp"

namespace stratmorse {

struct OracleResult {
  std::int64_t minimum = 0;
  MorseVector vector;
  DiscreteVectorField witness;
  std::uint64_t nodes = 0;
  /// True when the minimum is proven; false when the node budget ran out and
  /// the best field found so far is returned.
  bool exhausted = false;
};

OracleResult min_critical_matching(const SimplicialComplex2& k, std::uint64_t budget = 50'000'000);

}  // namespace stratmorse
