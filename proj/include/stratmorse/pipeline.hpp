#pragma once

// End-to-end runs over the library, with JSON reports. Shared by the C API
// and the acceptance suite.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stratmorse/homology.hpp"
#include "stratmorse/optimizer.hpp"
#include "stratmorse/oracle.hpp"
#include "stratmorse/stratifold.hpp"
#include "stratmorse/triangulate.hpp"

namespace stratmorse {

struct RunOptions {
  TriangulateOptions triangulation;
  std::vector<Coefficients> coefficients = default_coefficients();
  std::uint64_t oracle_budget = 50'000'000;
  /// verify runs the oracle only on meshes with at most this many cells.
  std::size_t oracle_max_cells = 60;
  BoundaryReading reading = BoundaryReading::Polygon;
  /// When set, the oracle is also run on a randomly relabelled copy.
  std::optional<std::uint64_t> seed;
};

/// "id=L,id=L" into circle lengths. Throws Error(InvalidArgument).
std::map<std::string, std::int64_t> parse_circle_lengths(const std::string& text);

nlohmann::json betti_json(const BettiVector& b);
nlohmann::json analyze_json(const StratifoldSpec& spec, const std::vector<Coefficients>& coefficients);
nlohmann::json homology_json(const SimplicialComplex2& k, const std::vector<Coefficients>& coefficients);
nlohmann::json report_json(const MorseReport& r, const GradientResult& g, const SimplicialComplex2& k);
nlohmann::json oracle_json(const OracleResult& r);

/// Same complex with vertex ids permuted by a seeded shuffle.
SimplicialComplex2 relabel(const SimplicialComplex2& k, std::uint64_t seed);

struct OracleRun {
  OracleResult result;
  std::optional<OracleResult> relabelled;
  nlohmann::json json;
};

OracleRun run_oracle(const SimplicialComplex2& k, const RunOptions& options);

struct MorseRun {
  GradientResult gradient;
  MorseReport report;
  std::optional<OracleRun> oracle;
  nlohmann::json json;
};

/// optimal_gradient plus its report on an imported mesh; the spec, when given,
/// must describe the mesh. Small meshes are also sent to the oracle.
MorseRun run_morse(const StratifoldMesh& sm, const StratifoldSpec* spec, const RunOptions& options);

struct VerifyRun {
  Triangulation triangulation;
  GradientResult gradient;
  MorseReport report;
  nlohmann::json json;
};

/// triangulate -> optimal_gradient -> homology -> oracle (small meshes only)
/// -> cross-checks. Violations end up in report.violations.
VerifyRun run_verify(const StratifoldSpec& spec, const RunOptions& options);

struct BenchPoint {
  int fineness = 0;
  std::size_t cells = 0;
  std::size_t steps = 0;
  double seconds = 0;
};

struct BenchRun {
  std::vector<BenchPoint> points;
  /// Step counts and wall times grow by at most 1.5 times the cell ratio
  /// between consecutive sizes.
  bool steps_linear = true;
  bool time_linear = true;
  nlohmann::json json;
};

BenchRun run_bench(const StratifoldSpec& spec, const RunOptions& options, int max_fineness);

}  // namespace stratmorse
