#pragma once

// Annotated triangulations of stratifolds: each surface is a polygon whose
// sides (schema edges, bridge paths, boundary cycles) are identified, and whose
// boundary cycles wrap around their circles.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stratmorse/complex.hpp"
#include "stratmorse/stratifold.hpp"

namespace stratmorse {

enum class VertexRole : std::uint8_t { PolygonBoundary, Internal };
enum class EdgeRole : std::uint8_t { Boundary, Crossing, Bridge, Internal };

char role_letter(VertexRole r);
char role_letter(EdgeRole r);

/// Membership data attached to a mesh. Surface index is -1 exactly on circle
/// cells; circle index is -1 exactly off them.
struct CellStructure {
  std::vector<std::string> circle_ids;
  std::size_t num_surfaces = 0;
  std::array<std::vector<Index>, 3> surface;
  std::array<std::vector<Index>, 2> circle;
  /// Lies on the image of a polygon boundary (circles, bridge paths, schema
  /// sides).
  std::vector<char> vertex_boundary;
  std::vector<char> edge_boundary;

  bool operator==(const CellStructure&) const = default;
};

struct PolygonId {
  Index surface = -1;
  Index polygon = -1;

  bool operator==(const PolygonId&) const = default;
};

struct StratifoldMesh {
  SimplicialComplex2 mesh;
  CellStructure structure;
  std::vector<VertexRole> vertex_roles;
  std::vector<EdgeRole> edge_roles;
  std::vector<PolygonId> polygon;  // per face
};

/// Faces of one sub-polygon, sorted.
struct SubPolygon {
  std::vector<Index> faces;
};

/// Derives roles from the boundary flags, decomposes every surface into
/// sub-polygons and validates. Throws Error(InconsistentStructure) if the maps
/// do not cover the mesh or contradict each other, Error(ValidationError) if
/// the result violates a mesh invariant.
StratifoldMesh label_cells(SimplicialComplex2 mesh, CellStructure structure);

/// Faces of `surface` split along crossing and boundary edges, ordered by
/// smallest face id.
std::vector<SubPolygon> decompose_polygons(const StratifoldMesh& sm, Index surface);

/// Checks every StratifoldMesh invariant; throws Error(ValidationError).
void validate_mesh(const StratifoldMesh& sm);

/// Same mesh and memberships, with only circle cells counted as boundary.
StratifoldMesh circles_reading(const StratifoldMesh& sm);

struct TriangulateOptions {
  /// Edge count of each circle before subdivision; missing ids default to 3.
  std::map<std::string, std::int64_t> circle_lengths;
  int fineness = 0;
  /// Number of interior edge flips that create crossing edges.
  int chords = 0;
  /// Refuse to build meshes with more triangles than this.
  std::size_t max_triangles = 4'000'000;
};

struct Triangulation {
  StratifoldMesh mesh;
  /// Per face: index (within its surface) of the attachment whose polygon
  /// sides it descends from, -1 for schema sides.
  std::vector<Index> face_attachment;
};

Triangulation triangulate_spec(const StratifoldSpec& spec, const TriangulateOptions& options = {});

/// Per circle edge and surface, the number of incident faces; used to check
/// the covering degrees against a spec.
std::vector<std::vector<std::int64_t>> circle_edge_sheets(const StratifoldMesh& sm);

// --- files -------------------------------------------------------------------

void write_annotations(std::ostream& out, const StratifoldMesh& sm);
/// Vertex ids in both files are the mesh file's ids. Throws Error(ParseError)
/// or Error(ValidationError).
StratifoldMesh import_mesh(std::istream& mesh_in, std::istream& annotation_in);
StratifoldMesh import_mesh_files(const std::string& mesh_path, const std::string& annotation_path);

}  // namespace stratmorse
