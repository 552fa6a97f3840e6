#pragma once

// Discrete vector fields, V-paths and discrete Morse functions on a
// SimplicialComplex2.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "stratmorse/complex.hpp"
#include "stratmorse/homology.hpp"

namespace stratmorse {

using Rational = boost::rational<std::int64_t>;

/// Pairs (tau, sigma) with tau a facet of sigma.
struct DiscreteVectorField {
  std::vector<std::pair<CellRef, CellRef>> pairs;

  /// Sorts pairs by lower cell; equality of fields is then vector equality.
  void normalize();
  bool operator==(const DiscreteVectorField&) const = default;
};

struct DiscreteMorseFunction {
  std::array<std::vector<Rational>, 3> values;

  Rational operator()(CellRef c) const { return values[c.dim][c.index]; }
  /// f(sigma) = dim sigma.
  static DiscreteMorseFunction dimension_function(const SimplicialComplex2& k);
};

/// tau0 < sigma0 > tau1 < sigma1 > ... ; closed when it ends at its start.
struct VPath {
  std::vector<CellRef> cells;

  bool closed() const { return cells.size() >= 3 && cells.front() == cells.back(); }
};

struct MorseVector {
  std::int64_t m0 = 0, m1 = 0, m2 = 0;

  std::int64_t operator[](std::size_t i) const { return i == 0 ? m0 : (i == 1 ? m1 : m2); }
  std::int64_t total() const { return m0 + m1 + m2; }
  std::int64_t euler() const { return m0 - m1 + m2; }
  bool operator==(const MorseVector&) const = default;
};

/// Array-backed partner tables for a matching on K. Used by every algorithm
/// that builds or inspects fields incrementally.
class Matching {
 public:
  explicit Matching(const SimplicialComplex2& k);

  /// Returns nullopt (with a reason) if V is not a matching on K. Throws
  /// Error(UnknownCell) if V names a cell not in K.
  static std::optional<Matching> from_field(const DiscreteVectorField& v,
                                            const SimplicialComplex2& k,
                                            std::string* why = nullptr);

  const SimplicialComplex2& complex() const { return *k_; }

  /// Partner of c one dimension up / down, or -1.
  Index up(CellRef c) const { return c.dim < 2 ? up_[c.dim][c.index] : -1; }
  Index down(CellRef c) const { return c.dim > 0 ? down_[c.dim - 1][c.index] : -1; }
  bool is_matched(CellRef c) const { return up(c) >= 0 || down(c) >= 0; }

  /// Both cells must be unmatched and lower a facet of upper (unchecked).
  void pair(CellRef lower, CellRef upper);
  void unpair(CellRef lower);

  std::size_t size() const { return size_; }
  DiscreteVectorField to_field() const;
  std::vector<CellRef> critical() const;
  MorseVector counts() const;

 private:
  const SimplicialComplex2* k_;
  // up_[d][i]: (d+1)-cell matched with d-cell i. down_[d][j]: d-cell matched
  // with (d+1)-cell j.
  std::array<std::vector<Index>, 2> up_;
  std::array<std::vector<Index>, 2> down_;
  std::size_t size_ = 0;
};

bool is_matching(const DiscreteVectorField& v, const SimplicialComplex2& k);

/// A closed V-path if one exists. Linear in the size of K.
std::optional<VPath> find_closed_vpath(const Matching& m);
std::optional<VPath> find_closed_vpath(const DiscreteVectorField& v, const SimplicialComplex2& k);

DiscreteMorseFunction induce_dmf_values(const DiscreteVectorField& v, const SimplicialComplex2& k);
bool is_dmf(const DiscreteMorseFunction& f, const SimplicialComplex2& k);
DiscreteVectorField gradient_of(const DiscreteMorseFunction& f, const SimplicialComplex2& k);

struct CriticalCells {
  std::vector<CellRef> cells;
  MorseVector counts;
};

CriticalCells critical_cells(const DiscreteVectorField& v, const SimplicialComplex2& k);

/// Breadth-first spanning tree of the 1-skeleton from root (neighbors in
/// increasing order); each tree edge is paired with its child endpoint.
DiscreteVectorField tree_gradient(const SimplicialComplex2& g, Index root);

bool check_morse_inequalities(const MorseVector& m, const BettiVector& b, std::int64_t chi);

/// Reverses the unique gradient path from b's facets to a. `a` must be a
/// critical d-cell and `b` a critical (d+1)-cell.
DiscreteVectorField cancel_critical_pair(const DiscreteVectorField& v, CellRef a, CellRef b,
                                         const SimplicialComplex2& k);
/// In-place variant; returns the number of gradient paths found (0, 1 or 2
/// meaning "at least two") and only reverses when it is exactly 1.
int cancel_in_place(Matching& m, CellRef a, CellRef b);

// --- text format -----------------------------------------------------------

/// Lines "pair <cell> <cell>".
void write_field(std::ostream& out, const DiscreteVectorField& v, const SimplicialComplex2& k);
DiscreteVectorField read_field(std::istream& in, const SimplicialComplex2& k);

}  // namespace stratmorse
