#pragma once

// Combinatorial description of a 2-stratifold: surfaces with boundary glued to
// circles by covering maps of given (signed) degree.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratmorse/morse.hpp"

namespace stratmorse {

struct Attachment {
  std::string circle;
  std::int64_t degree = 0;

  bool operator==(const Attachment&) const = default;
};

/// genus >= 0: orientable of that genus; genus < 0: |genus| crosscaps.
struct SurfaceSpec {
  std::int64_t genus = 0;
  std::vector<Attachment> attachments;

  bool orientable() const { return genus >= 0; }
  bool operator==(const SurfaceSpec&) const = default;
};

struct StratifoldSpec {
  std::vector<std::string> circles;
  std::vector<SurfaceSpec> surfaces;

  /// Position of a circle id; throws Error(InvalidSpec) if unknown.
  std::size_t circle_index(std::string_view id) const;
  bool operator==(const StratifoldSpec&) const = default;
};

/// Parses the JSON spec format. Unknown fields and wrong types are rejected
/// with Error(ParseError). Does not validate.
StratifoldSpec parse_spec_json(const std::string& text);
StratifoldSpec load_spec(const std::string& path);
std::string spec_to_json(const StratifoldSpec& spec);

/// All violated invariants, in a fixed order; empty means valid.
std::vector<std::string> validate_spec(const StratifoldSpec& spec);
/// Throws Error(InvalidSpec) listing every violation.
void require_valid(const StratifoldSpec& spec);

struct GraphEdge {
  std::size_t surface = 0;
  std::size_t circle = 0;
  std::int64_t weight = 0;
};

/// Bicolored multigraph: white vertices are surfaces, black are circles.
struct StratifoldGraph {
  std::vector<std::int64_t> white_genus;
  std::vector<std::string> black;
  std::vector<GraphEdge> edges;
};

StratifoldGraph build_graph(const StratifoldSpec& spec);

/// Every degree has absolute value >= 2. Does not require a valid spec.
bool is_twisted(const StratifoldSpec& spec);

enum class StratifoldKind { Type1, Type2, Type3, Type4, NotTwisted };
std::string_view to_string(StratifoldKind kind);

struct PairSum {
  std::size_t surface = 0;
  std::size_t circle = 0;
  std::int64_t sum = 0;
};

struct StratifoldType {
  StratifoldKind kind = StratifoldKind::NotTwisted;
  /// Type1: smallest prime factor of the gcd (2 if the gcd is 0). Type3: 2.
  std::optional<std::uint32_t> witness_prime;
  std::vector<std::uint64_t> prime_factors;
  /// gcd of |s(i,j)| over attached pairs, 0 if all vanish.
  std::uint64_t gcd = 0;
  std::vector<PairSum> sums;
};

/// Per attached (surface, circle) pair, the sum of degrees.
std::vector<PairSum> pair_sums(const StratifoldSpec& spec);
StratifoldType classify(const StratifoldSpec& spec);

std::int64_t surface_euler(const SurfaceSpec& s);
std::int64_t euler_from_spec(const StratifoldSpec& spec);
/// (1, 1 + n - chi, n).
MorseVector predicted_morse_vector(const StratifoldSpec& spec);

}  // namespace stratmorse
