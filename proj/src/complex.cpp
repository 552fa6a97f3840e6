#include "stratmorse/complex.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "stratmorse/error.hpp"

namespace stratmorse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSimplex: return "InvalidSimplex";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::NotAMatching: return "NotAMatching";
    case ErrorCode::ClosedPathExists: return "ClosedPathExists";
    case ErrorCode::NotADmf: return "NotADmf";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::RootMissing: return "RootMissing";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::MultiplePaths: return "MultiplePaths";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NegativePrediction: return "NegativePrediction";
    case ErrorCode::CircleTooShort: return "CircleTooShort";
    case ErrorCode::InconsistentStructure: return "InconsistentStructure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::DualNotTree: return "DualNotTree";
    case ErrorCode::RepairFailed: return "RepairFailed";
    case ErrorCode::MismatchedSpec: return "MismatchedSpec";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void build_csr(std::size_t n, const std::vector<std::pair<Index, Index>>& incidences,
               std::vector<Index>& offsets, std::vector<Index>& values) {
  offsets.assign(n + 1, 0);
  for (const auto& [owner, value] : incidences) ++offsets[owner + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  values.assign(incidences.size(), 0);
  std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
  // incidences arrive sorted by value, so each row ends up sorted as well
  for (const auto& [owner, value] : incidences) values[cursor[owner]++] = value;
}

}  // namespace

std::size_t SimplicialComplex2::num_cells(int dim) const {
  switch (dim) {
    case 0: return num_vertices_;
    case 1: return edges_.size();
    case 2: return triangles_.size();
    default: return 0;
  }
}

int SimplicialComplex2::dimension() const {
  if (!triangles_.empty()) return 2;
  if (!edges_.empty()) return 1;
  return num_vertices_ > 0 ? 0 : -1;
}

std::span<const Index> SimplicialComplex2::vertex_cofacets(Index v) const {
  return {vertex_cof_.data() + vertex_cof_offsets_[v],
          static_cast<std::size_t>(vertex_cof_offsets_[v + 1] - vertex_cof_offsets_[v])};
}

std::span<const Index> SimplicialComplex2::edge_cofacets(Index e) const {
  return {edge_cof_.data() + edge_cof_offsets_[e],
          static_cast<std::size_t>(edge_cof_offsets_[e + 1] - edge_cof_offsets_[e])};
}

std::optional<Index> SimplicialComplex2::find_edge(Index a, Index b) const {
  if (a > b) std::swap(a, b);
  const std::array<Index, 2> key{a, b};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<Index>(it - edges_.begin());
}

std::optional<Index> SimplicialComplex2::find_triangle(Index a, Index b, Index c) const {
  std::array<Index, 3> key{a, b, c};
  std::sort(key.begin(), key.end());
  auto it = std::lower_bound(triangles_.begin(), triangles_.end(), key);
  if (it == triangles_.end() || *it != key) return std::nullopt;
  return static_cast<Index>(it - triangles_.begin());
}

std::optional<CellRef> SimplicialComplex2::find(const Cell& cell) const {
  const auto& v = cell.vertices;
  switch (v.size()) {
    case 1:
      if (v[0] >= 0 && static_cast<std::size_t>(v[0]) < num_vertices_) return CellRef{0, v[0]};
      return std::nullopt;
    case 2:
      if (auto e = find_edge(v[0], v[1])) return CellRef{1, *e};
      return std::nullopt;
    case 3:
      if (auto t = find_triangle(v[0], v[1], v[2])) return CellRef{2, *t};
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

Cell SimplicialComplex2::cell(CellRef c) const {
  switch (c.dim) {
    case 0: return Cell{{c.index}};
    case 1: return Cell{{edges_[c.index][0], edges_[c.index][1]}};
    case 2: {
      const auto& t = triangles_[c.index];
      return Cell{{t[0], t[1], t[2]}};
    }
    default: throw Error(ErrorCode::UnknownCell, "dimension out of range");
  }
}

std::vector<CellRef> SimplicialComplex2::facets(CellRef c) const {
  switch (c.dim) {
    case 1: return {{0, edges_[c.index][0]}, {0, edges_[c.index][1]}};
    case 2: {
      const auto& te = triangle_edges_[c.index];
      return {{1, te[0]}, {1, te[1]}, {1, te[2]}};
    }
    default: return {};
  }
}

std::vector<CellRef> SimplicialComplex2::cofacets(CellRef c) const {
  std::vector<CellRef> out;
  if (c.dim == 0) {
    for (Index e : vertex_cofacets(c.index)) out.push_back({1, e});
  } else if (c.dim == 1) {
    for (Index t : edge_cofacets(c.index)) out.push_back({2, t});
  }
  return out;
}

void SimplicialComplex2::check_invariants() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); };
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (!(ed[0] < ed[1])) fail("edge vertices not strictly increasing");
    if (ed[1] >= static_cast<Index>(num_vertices_)) fail("edge references a missing vertex");
    if (e > 0 && !(edges_[e - 1] < ed)) fail("edges not in canonical order");
  }
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tr = triangles_[t];
    if (!(tr[0] < tr[1] && tr[1] < tr[2])) fail("triangle vertices not strictly increasing");
    if (t > 0 && !(triangles_[t - 1] < tr)) fail("triangles not in canonical order");
    const std::array<std::array<Index, 2>, 3> expect{{{tr[0], tr[1]}, {tr[0], tr[2]}, {tr[1], tr[2]}}};
    for (int s = 0; s < 3; ++s) {
      Index e = triangle_edges_[t][s];
      if (e < 0 || static_cast<std::size_t>(e) >= edges_.size() || edges_[e] != expect[s])
        fail("triangle edge table inconsistent (closure)");
      auto cof = edge_cofacets(e);
      if (!std::binary_search(cof.begin(), cof.end(), static_cast<Index>(t)))
        fail("edge cofacets missing a triangle");
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    for (Index v : edges_[e]) {
      auto cof = vertex_cofacets(v);
      if (!std::binary_search(cof.begin(), cof.end(), static_cast<Index>(e)))
        fail("vertex cofacets missing an edge");
    }
    for (Index t : edge_cofacets(static_cast<Index>(e))) {
      const auto& te = triangle_edges_[t];
      if (std::find(te.begin(), te.end(), static_cast<Index>(e)) == te.end())
        fail("edge cofacet is not a cofacet");
    }
  }
  std::size_t vertex_incidences = 0;
  for (std::size_t v = 0; v < num_vertices_; ++v) {
    for (Index e : vertex_cofacets(static_cast<Index>(v))) {
      if (edges_[e][0] != static_cast<Index>(v) && edges_[e][1] != static_cast<Index>(v))
        fail("vertex cofacet is not a cofacet");
      ++vertex_incidences;
    }
  }
  if (vertex_incidences != 2 * edges_.size()) fail("vertex cofacet count mismatch");
}

SimplicialComplex2 build_complex(const std::vector<std::vector<Index>>& simplices) {
  std::vector<Index> ids;
  for (const auto& s : simplices) {
    if (s.empty() || s.size() > 3)
      throw Error(ErrorCode::InvalidSimplex,
                  "simplex with " + std::to_string(s.size()) + " vertices");
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[i] == s[j]) throw Error(ErrorCode::InvalidSimplex, "repeated vertex in simplex");
    ids.insert(ids.end(), s.begin(), s.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](Index v) {
    return static_cast<Index>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };

  SimplicialComplex2 k;
  k.num_vertices_ = ids.size();
  for (const auto& s : simplices) {
    if (s.size() == 2) {
      std::array<Index, 2> e{dense(s[0]), dense(s[1])};
      if (e[0] > e[1]) std::swap(e[0], e[1]);
      k.edges_.push_back(e);
    } else if (s.size() == 3) {
      std::array<Index, 3> t{dense(s[0]), dense(s[1]), dense(s[2])};
      std::sort(t.begin(), t.end());
      k.triangles_.push_back(t);
    }
  }
  std::sort(k.triangles_.begin(), k.triangles_.end());
  k.triangles_.erase(std::unique(k.triangles_.begin(), k.triangles_.end()), k.triangles_.end());
  for (const auto& t : k.triangles_) {
    k.edges_.push_back({t[0], t[1]});
    k.edges_.push_back({t[0], t[2]});
    k.edges_.push_back({t[1], t[2]});
  }
  std::sort(k.edges_.begin(), k.edges_.end());
  k.edges_.erase(std::unique(k.edges_.begin(), k.edges_.end()), k.edges_.end());

  k.triangle_edges_.resize(k.triangles_.size());
  for (std::size_t t = 0; t < k.triangles_.size(); ++t) {
    const auto& tr = k.triangles_[t];
    k.triangle_edges_[t] = {*k.find_edge(tr[0], tr[1]), *k.find_edge(tr[0], tr[2]),
                            *k.find_edge(tr[1], tr[2])};
  }

  std::vector<std::pair<Index, Index>> inc;
  inc.reserve(2 * k.edges_.size());
  for (std::size_t e = 0; e < k.edges_.size(); ++e) {
    inc.emplace_back(k.edges_[e][0], static_cast<Index>(e));
    inc.emplace_back(k.edges_[e][1], static_cast<Index>(e));
  }
  build_csr(k.num_vertices_, inc, k.vertex_cof_offsets_, k.vertex_cof_);
  inc.clear();
  inc.reserve(3 * k.triangles_.size());
  for (std::size_t t = 0; t < k.triangles_.size(); ++t)
    for (Index e : k.triangle_edges_[t]) inc.emplace_back(e, static_cast<Index>(t));
  build_csr(k.edges_.size(), inc, k.edge_cof_offsets_, k.edge_cof_);
  return k;
}

std::int64_t euler_characteristic(const SimplicialComplex2& k) {
  return static_cast<std::int64_t>(k.num_vertices()) - static_cast<std::int64_t>(k.num_edges()) +
         static_cast<std::int64_t>(k.num_triangles());
}

SimplicialComplex2 barycentric_subdivide(const SimplicialComplex2& k) {
  const Index nv = static_cast<Index>(k.num_vertices());
  const Index ne = static_cast<Index>(k.num_edges());
  std::vector<std::vector<Index>> simplices;
  simplices.reserve(k.num_vertices() + 2 * k.num_edges() + 6 * k.num_triangles());
  for (Index v = 0; v < nv; ++v) simplices.push_back({v});
  for (Index e = 0; e < ne; ++e) {
    simplices.push_back({k.edge(e)[0], nv + e});
    simplices.push_back({k.edge(e)[1], nv + e});
  }
  for (Index t = 0; t < static_cast<Index>(k.num_triangles()); ++t) {
    const Index center = nv + ne + t;
    for (Index e : k.triangle_edges(t))
      for (Index v : k.edge(e)) simplices.push_back({v, nv + e, center});
  }
  return build_complex(simplices);
}

std::size_t connected_components(const SimplicialComplex2& k) {
  std::vector<Index> parent(k.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = k.num_vertices();
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    Index a = find(k.edge(static_cast<Index>(e))[0]), b = find(k.edge(static_cast<Index>(e))[1]);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps;
}

std::string spell(const SimplicialComplex2& k, CellRef c) {
  static constexpr char tags[] = {'v', 'e', 't'};
  std::string out(1, tags[c.dim]);
  for (Index v : k.cell(c).vertices) out += ' ' + std::to_string(v);
  return out;
}

MeshRecords parse_mesh_records(std::istream& in) {
  MeshRecords r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    std::size_t arity = tag == "v" ? 1 : tag == "e" ? 2 : tag == "t" ? 3 : 0;
    if (arity == 0) bad("unknown record '" + tag + "'");
    std::array<std::int64_t, 3> ids{};
    for (std::size_t i = 0; i < arity; ++i)
      if (!(ls >> ids[i]) || ids[i] < 0) bad("expected a non-negative integer id");
    std::string extra;
    if (ls >> extra) bad("trailing token '" + extra + "'");
    if (arity == 1) r.vertices.push_back(ids[0]);
    if (arity == 2) r.edges.push_back({ids[0], ids[1]});
    if (arity == 3) r.triangles.push_back({ids[0], ids[1], ids[2]});
  }
  return r;
}

SimplicialComplex2 complex_from_records(const MeshRecords& records,
                                        std::vector<std::int64_t>* original_ids) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ValidationError, why); };
  std::vector<std::int64_t> ids = records.vertices;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) fail("duplicate vertex record");
  if (ids.size() > static_cast<std::size_t>(std::numeric_limits<Index>::max()))
    fail("too many vertices");
  auto dense = [&](std::int64_t v) -> Index {
    auto it = std::lower_bound(ids.begin(), ids.end(), v);
    if (it == ids.end() || *it != v) fail("vertex " + std::to_string(v) + " is not listed (closure)");
    return static_cast<Index>(it - ids.begin());
  };
  std::vector<std::array<Index, 2>> edges;
  for (const auto& e : records.edges) {
    if (e[0] == e[1]) fail("degenerate edge");
    std::array<Index, 2> d{dense(e[0]), dense(e[1])};
    if (d[0] > d[1]) std::swap(d[0], d[1]);
    edges.push_back(d);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) fail("duplicate edge record");

  std::vector<std::vector<Index>> simplices;
  simplices.reserve(ids.size() + edges.size() + records.triangles.size());
  for (std::size_t v = 0; v < ids.size(); ++v) simplices.push_back({static_cast<Index>(v)});
  for (const auto& e : edges) simplices.push_back({e[0], e[1]});
  std::vector<std::array<Index, 3>> tris;
  for (const auto& t : records.triangles) {
    std::array<Index, 3> d{dense(t[0]), dense(t[1]), dense(t[2])};
    std::sort(d.begin(), d.end());
    if (d[0] == d[1] || d[1] == d[2]) fail("degenerate triangle");
    for (auto [a, b] : {std::pair{d[0], d[1]}, std::pair{d[0], d[2]}, std::pair{d[1], d[2]}})
      if (!std::binary_search(edges.begin(), edges.end(), std::array<Index, 2>{a, b}))
        fail("triangle edge " + std::to_string(ids[a]) + " " + std::to_string(ids[b]) +
             " is not listed (closure)");
    tris.push_back(d);
    simplices.push_back({d[0], d[1], d[2]});
  }
  std::sort(tris.begin(), tris.end());
  if (std::adjacent_find(tris.begin(), tris.end()) != tris.end()) fail("duplicate triangle record");
  if (original_ids) *original_ids = ids;
  return build_complex(simplices);
}

void write_mesh(std::ostream& out, const SimplicialComplex2& k) {
  for (std::size_t v = 0; v < k.num_vertices(); ++v) out << "v " << v << '\n';
  for (std::size_t e = 0; e < k.num_edges(); ++e)
    out << "e " << k.edge(static_cast<Index>(e))[0] << ' ' << k.edge(static_cast<Index>(e))[1] << '\n';
  for (std::size_t t = 0; t < k.num_triangles(); ++t) {
    const auto& tr = k.triangle(static_cast<Index>(t));
    out << "t " << tr[0] << ' ' << tr[1] << ' ' << tr[2] << '\n';
  }
}

SimplicialComplex2 read_mesh(std::istream& in) { return complex_from_records(parse_mesh_records(in)); }

}  // namespace stratmorse
