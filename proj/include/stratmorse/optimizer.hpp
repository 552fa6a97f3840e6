#pragma once

// Gradient fields on annotated stratifold meshes: spanning trees on the
// internal graph of every sub-polygon, dual trees on faces, and a spanning
// tree on the boundary graph.

#include <optional>
#include <string>
#include <vector>

#include "stratmorse/homology.hpp"
#include "stratmorse/morse.hpp"
#include "stratmorse/stratifold.hpp"
#include "stratmorse/triangulate.hpp"

namespace stratmorse {

struct OracleResult;

enum class BoundaryReading { Polygon, Circles };
std::string_view to_string(BoundaryReading r);
BoundaryReading parse_boundary_reading(const std::string& text);

/// Faces of one sub-polygon joined across shared non-boundary, non-crossing
/// edges that are not spanning-tree edges.
struct DualGraph {
  std::vector<Index> faces;
  struct Arc {
    Index a;  // positions in `faces`
    Index b;
    Index edge;
  };
  std::vector<Arc> arcs;

  bool connected() const;
  bool is_tree() const { return arcs.size() + 1 == faces.size() && connected(); }
};

DualGraph dual_graph(const StratifoldMesh& sm, const SubPolygon& polygon, const std::vector<char>& tree_edge);

struct GradientResult {
  DiscreteVectorField field;
  MorseVector m;
  std::vector<CellRef> critical;
  BoundaryReading reading = BoundaryReading::Polygon;
  bool repair = false;
  std::size_t cancellations = 0;
  /// Circles reading only: some dual graph was not a tree and a spanning
  /// forest of it was used instead.
  bool dual_fallback = false;
  std::vector<std::size_t> polygons_per_surface;
  /// Elementary steps (cell visits) taken; the linear-time check reads this.
  std::size_t steps = 0;
};

/// Throws Error(DualNotTree), Error(ClosedPathExists), Error(RepairFailed) or
/// Error(InvariantViolation) when a post-condition fails.
GradientResult optimal_gradient(const StratifoldMesh& sm, BoundaryReading reading = BoundaryReading::Polygon);

enum class Optimality { TwistedTheorem, OracleCertified, OracleRefuted, Unknown };
std::string_view to_string(Optimality o);

struct InequalityCheck {
  Coefficients coefficients;
  BettiVector betti;
  bool holds = false;
};

struct MorseReport {
  MorseVector m;
  std::vector<CellRef> critical;
  /// Absent when no spec is available.
  std::optional<StratifoldType> type;
  std::vector<Coefficients> perfect;
  Optimality optimal = Optimality::Unknown;
  std::vector<InequalityCheck> checks;
  bool repair = false;
  std::optional<MorseVector> predicted;
  std::optional<std::int64_t> oracle_minimum;
  bool oracle_exhausted = false;
  /// Cross-module disagreements; empty on a clean run.
  std::vector<std::string> violations;
};

/// The default coefficient systems checked by every report.
std::vector<Coefficients> default_coefficients();

/// Throws Error(MismatchedSpec) unless the mesh's surfaces, circles, Euler
/// characteristics and covering degrees match the spec.
void check_mesh_matches_spec(const StratifoldMesh& sm, const StratifoldSpec& spec);

/// Builds the report for a field computed by optimal_gradient. With a spec,
/// classifies and checks the perfectness claims; with an oracle result,
/// compares against its minimum.
MorseReport verify_report(const GradientResult& g, const StratifoldMesh& sm, const StratifoldSpec* spec,
                          const std::vector<Coefficients>& coefficients, const OracleResult* oracle = nullptr);

}  // namespace stratmorse
