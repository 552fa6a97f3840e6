#pragma once

// Finite simplicial complexes of dimension at most two.
//
// Cells are identified canonically by their sorted vertex lists and stored per
// dimension in lexicographic order, so every traversal below is deterministic.
// Vertex ids are dense (0..V-1); the builder re-indexes whatever it is given.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stratmorse {

using Index = std::int32_t;

/// A cell of a SimplicialComplex2, addressed by dimension and position in the
/// canonical order of that dimension.
struct CellRef {
  int dim = 0;
  Index index = 0;

  auto operator<=>(const CellRef&) const = default;
};

/// A cell spelled by its vertices (sorted, 1 to 3 entries).
struct Cell {
  std::vector<Index> vertices;

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }
  auto operator<=>(const Cell&) const = default;
};

class SimplicialComplex2 {
 public:
  SimplicialComplex2() = default;

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_cells(int dim) const;
  std::size_t num_cells() const { return num_vertices_ + edges_.size() + triangles_.size(); }
  int dimension() const;

  const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }
  const std::array<Index, 3>& triangle(Index t) const { return triangles_[t]; }
  /// Edges of triangle t in the order (01, 02, 12).
  const std::array<Index, 3>& triangle_edges(Index t) const { return triangle_edges_[t]; }

  /// Edges containing v, sorted; equivalently sorted by the other endpoint.
  std::span<const Index> vertex_cofacets(Index v) const;
  /// Triangles containing e, sorted.
  std::span<const Index> edge_cofacets(Index e) const;

  Index other_endpoint(Index e, Index v) const {
    return edges_[e][0] == v ? edges_[e][1] : edges_[e][0];
  }

  std::optional<Index> find_edge(Index a, Index b) const;
  std::optional<Index> find_triangle(Index a, Index b, Index c) const;
  std::optional<CellRef> find(const Cell& cell) const;

  Cell cell(CellRef c) const;
  std::vector<CellRef> facets(CellRef c) const;
  std::vector<CellRef> cofacets(CellRef c) const;
  bool contains(CellRef c) const {
    return c.dim >= 0 && c.dim <= 2 && c.index >= 0 &&
           static_cast<std::size_t>(c.index) < num_cells(c.dim);
  }

  /// Verifies closure, canonical ordering and facet/cofacet consistency;
  /// throws Error(InvariantViolation) on the first failure.
  void check_invariants() const;

  friend SimplicialComplex2 build_complex(const std::vector<std::vector<Index>>& simplices);

 private:
  std::size_t num_vertices_ = 0;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<std::array<Index, 3>> triangle_edges_;
  // CSR cofacet tables.
  std::vector<Index> vertex_cof_offsets_, vertex_cof_;
  std::vector<Index> edge_cof_offsets_, edge_cof_;
};

/// Closure of the given simplices (each a list of 1-3 distinct vertex ids).
/// Vertex ids are re-indexed densely in increasing order of the input ids.
SimplicialComplex2 build_complex(const std::vector<std::vector<Index>>& simplices);

std::int64_t euler_characteristic(const SimplicialComplex2& k);

/// Standard barycentric subdivision. Original vertices keep their ids; the
/// barycenter of edge e is vertex V+e, of triangle t is vertex V+E+t (before
/// canonical re-indexing, which leaves this order intact).
SimplicialComplex2 barycentric_subdivide(const SimplicialComplex2& k);

/// Number of connected components (isolated vertices count).
std::size_t connected_components(const SimplicialComplex2& k);

// --- text format -----------------------------------------------------------

/// Canonical spelling "v 3", "e 3 7", "t 1 4 9".
std::string spell(const SimplicialComplex2& k, CellRef c);

/// Raw contents of a mesh file, before closure checks or re-indexing.
struct MeshRecords {
  std::vector<std::int64_t> vertices;
  std::vector<std::array<std::int64_t, 2>> edges;
  std::vector<std::array<std::int64_t, 3>> triangles;
};

MeshRecords parse_mesh_records(std::istream& in);

/// Builds a complex from records, requiring that every listed cell's facets
/// are themselves listed. `relabel` receives the dense id of each original id
/// (sorted order). Throws Error(ValidationError) on a closure violation.
SimplicialComplex2 complex_from_records(const MeshRecords& records,
                                        std::vector<std::int64_t>* original_ids = nullptr);

void write_mesh(std::ostream& out, const SimplicialComplex2& k);
SimplicialComplex2 read_mesh(std::istream& in);

}  // namespace stratmorse
