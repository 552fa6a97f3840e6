#pragma once

// Exact homology over Z, Q and F_p for complexes of dimension <= 2, both for
// simplicial complexes and for the small CW chain complexes of stratifolds.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratmorse/complex.hpp"

namespace stratmorse {

using BigInt = boost::multiprecision::cpp_int;

struct StratifoldSpec;

class Coefficients {
 public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Coefficients integers() { return Coefficients(Kind::Integers, 0); }
  static Coefficients rationals() { return Coefficients(Kind::Rationals, 0); }
  /// Throws Error(NotPrime) for composite p.
  static Coefficients prime_field(std::uint32_t p);
  /// Accepts "Z", "Q", "F<p>" (e.g. "F3").
  static Coefficients parse(const std::string& text);
  /// Comma separated list, e.g. "Q,Z,F2,F3,F5".
  static std::vector<Coefficients> parse_list(const std::string& text);

  Kind kind() const { return kind_; }
  std::uint32_t prime() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  std::string name() const;

  bool operator==(const Coefficients&) const = default;

 private:
  Coefficients(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}
  Kind kind_;
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Sparse integer matrix stored by columns; each column is sorted by row.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<Index, std::int64_t>>> columns;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  static IntMatrix from_dense(const std::vector<std::vector<std::int64_t>>& row_major);
  std::vector<std::vector<std::int64_t>> to_dense() const;
  std::int64_t at(std::size_t r, std::size_t c) const;
  /// Adds v to entry (r, c); keeps the column sorted and drops zeros.
  void add(std::size_t r, std::size_t c, std::int64_t v);
  /// Row-major, space separated.
  std::string dump() const;
};

/// True when a * b is the zero matrix (dimensions must agree).
bool product_is_zero(const IntMatrix& a, const IntMatrix& b);

/// Boundary maps of a chain complex C2 -> C1 -> C0. d1 is |C0| x |C1| and d2
/// is |C1| x |C2|, so d1 * d2 = 0. Cell labels are filled in for CW complexes.
struct BoundaryMatrices {
  IntMatrix d1;
  IntMatrix d2;
  std::array<std::vector<std::string>, 3> labels;

  std::array<std::size_t, 3> chain_dims() const { return {d1.rows, d1.cols, d2.cols}; }
};

struct SmithForm {
  std::size_t rank = 0;
  /// Nonzero invariant factors d1 | d2 | ..., all positive.
  std::vector<BigInt> divisors;
};

SmithForm smith_normal_form(const IntMatrix& m);
std::size_t rank_mod_p(const IntMatrix& m, std::uint32_t p);
std::size_t rank_over(const IntMatrix& m, const Coefficients& c);

struct BettiVector {
  std::array<std::int64_t, 3> b{0, 0, 0};
  Coefficients coefficients = Coefficients::rationals();
  /// Invariant factors > 1 of H1 (integer coefficients only).
  std::vector<BigInt> torsion;

  std::int64_t operator[](std::size_t i) const { return b[i]; }
  std::int64_t euler() const { return b[0] - b[1] + b[2]; }
  std::int64_t total() const { return b[0] + b[1] + b[2]; }
  bool operator==(const BettiVector&) const = default;
};

/// Simplicial boundary with lexicographic orientation:
/// d[v0 v1] = v1 - v0, d[v0 v1 v2] = [v1 v2] - [v0 v2] + [v0 v1].
BoundaryMatrices boundary_matrices(const SimplicialComplex2& k);

BettiVector betti_from_chain(const BoundaryMatrices& m, const Coefficients& c);
BettiVector betti(const SimplicialComplex2& k, const Coefficients& c);

/// The CW chain complex of a stratifold: one 2-cell per surface, schema loops,
/// bridge cells and circles in C1, one base vertex per surface and per circle
/// in C0. Orders: C0 = (w_j per circle, v_i per surface);
/// C1 = (c_j per circle, then per surface its schema cells and its bridges).
BoundaryMatrices cw_chain_matrices(const StratifoldSpec& spec);
BettiVector cw_betti(const StratifoldSpec& spec, const Coefficients& c);

}  // namespace stratmorse
