#include "stratmorse/triangulate.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stratmorse/error.hpp"

namespace stratmorse {

char role_letter(VertexRole r) { return r == VertexRole::PolygonBoundary ? 'B' : 'I'; }

char role_letter(EdgeRole r) {
  switch (r) {
    case EdgeRole::Boundary: return 'B';
    case EdgeRole::Crossing: return 'X';
    case EdgeRole::Bridge: return 'D';
    case EdgeRole::Internal: return 'I';
  }
  return '?';
}

namespace {

// --- Delta complexes -----------------------------------------------------------

enum class TagKind : std::uint8_t { Circle, SurfaceBoundary, Interior };

struct Tag {
  TagKind kind;
  Index index;  // circle for Circle, surface otherwise
};

struct DTri {
  std::array<Index, 3> corner;
  // side k runs corner[k] -> corner[k+1]; fwd says whether that matches the
  // stored edge direction
  std::array<Index, 3> side;
  std::array<bool, 3> fwd;
  Index surface;
  Index attachment;
};

struct Delta {
  std::vector<Tag> vtag;
  std::vector<std::array<Index, 2>> edge;
  std::vector<Tag> etag;
  std::vector<DTri> tris;

  Index add_vertex(Tag t) {
    vtag.push_back(t);
    return static_cast<Index>(vtag.size() - 1);
  }
  Index add_edge(Index a, Index b, Tag t) {
    edge.push_back({a, b});
    etag.push_back(t);
    return static_cast<Index>(edge.size() - 1);
  }
};

Delta subdivide(const Delta& d) {
  const auto nv = static_cast<Index>(d.vtag.size());
  const auto ne = static_cast<Index>(d.edge.size());
  const auto nt = static_cast<Index>(d.tris.size());
  Delta out;
  out.vtag.reserve(nv + ne + nt);
  out.vtag = d.vtag;
  for (Index e = 0; e < ne; ++e) out.vtag.push_back(d.etag[e]);
  for (Index t = 0; t < nt; ++t) out.vtag.push_back({TagKind::Interior, d.tris[t].surface});
  out.edge.reserve(2 * ne + 6 * nt);
  for (Index e = 0; e < ne; ++e) {
    out.add_edge(d.edge[e][0], nv + e, d.etag[e]);
    out.add_edge(nv + e, d.edge[e][1], d.etag[e]);
  }
  out.tris.reserve(6 * nt);
  for (Index t = 0; t < nt; ++t) {
    const DTri& tri = d.tris[t];
    const Index b = nv + ne + t;
    const Tag inner{TagKind::Interior, tri.surface};
    std::array<Index, 3> to_corner{}, to_mid{};
    for (int k = 0; k < 3; ++k) to_corner[k] = out.add_edge(b, tri.corner[k], inner);
    for (int k = 0; k < 3; ++k) to_mid[k] = out.add_edge(b, nv + tri.side[k], inner);
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3;
      const Index e = tri.side[k];
      const Index m = nv + e;
      const Index h0 = 2 * e, h1 = 2 * e + 1;
      const bool f = tri.fwd[k];
      out.tris.push_back({{tri.corner[k], m, b},
                          {f ? h0 : h1, to_mid[k], to_corner[k]},
                          {f, false, true},
                          tri.surface,
                          tri.attachment});
      out.tris.push_back({{m, tri.corner[k1], b},
                          {f ? h1 : h0, to_corner[k1], to_mid[k]},
                          {f, false, true},
                          tri.surface,
                          tri.attachment});
    }
  }
  return out;
}

// --- flat simplicial data ----------------------------------------------------

struct FlatTri {
  std::array<Index, 3> v;  // sorted
  Index surface;
  Index attachment;
};

struct Flat {
  std::vector<Tag> vtag;
  std::vector<char> vertex_alive;
  std::map<std::array<Index, 2>, Tag> edges;
  std::vector<FlatTri> tris;
};

std::array<Index, 2> ekey(Index a, Index b) { return a < b ? std::array<Index, 2>{a, b} : std::array<Index, 2>{b, a}; }

Flat flatten(const Delta& d) {
  Flat f;
  f.vtag = d.vtag;
  f.vertex_alive.assign(d.vtag.size(), 1);
  for (std::size_t e = 0; e < d.edge.size(); ++e) {
    const auto& ed = d.edge[e];
    if (ed[0] == ed[1]) throw Error(ErrorCode::InvariantViolation, "subdivided complex still has a loop edge");
    if (!f.edges.emplace(ekey(ed[0], ed[1]), d.etag[e]).second) {
      throw Error(ErrorCode::InvariantViolation, "subdivided complex still has a multiple edge");
    }
  }
  std::set<std::array<Index, 3>> seen;
  f.tris.reserve(d.tris.size());
  for (const auto& t : d.tris) {
    std::array<Index, 3> v = t.corner;
    std::sort(v.begin(), v.end());
    if (v[0] == v[1] || v[1] == v[2]) throw Error(ErrorCode::InvariantViolation, "degenerate triangle after subdivision");
    if (!seen.insert(v).second) throw Error(ErrorCode::InvariantViolation, "duplicate triangle after subdivision");
    f.tris.push_back({v, t.surface, t.attachment});
  }
  return f;
}

bool on_boundary(const Tag& t) { return t.kind != TagKind::Interior; }

// Replaces the star of an interior vertex by a fan from a boundary vertex of
// its link, so that the fan contains an edge between two boundary vertices
// that is not itself a boundary edge.
int insert_chords(Flat& f, int wanted) {
  if (wanted <= 0) return 0;
  std::vector<std::vector<std::size_t>> star(f.vtag.size());
  for (std::size_t t = 0; t < f.tris.size(); ++t) {
    for (Index v : f.tris[t].v) star[v].push_back(t);
  }
  std::vector<char> touched(f.vtag.size(), 0);
  std::vector<char> tri_dead(f.tris.size(), 0);
  std::vector<FlatTri> added;
  int done = 0;
  for (Index a = 0; a < static_cast<Index>(f.vtag.size()) && done < wanted; ++a) {
    if (on_boundary(f.vtag[a]) || touched[a] || star[a].size() < 4) continue;
    if (std::any_of(star[a].begin(), star[a].end(),
                    [&](std::size_t t) { return f.tris[t].attachment != f.tris[star[a][0]].attachment; })) {
      continue;
    }
    // link cycle of a
    std::map<Index, std::vector<Index>> adj;
    for (std::size_t t : star[a]) {
      std::vector<Index> others;
      for (Index v : f.tris[t].v) {
        if (v != a) others.push_back(v);
      }
      adj[others[0]].push_back(others[1]);
      adj[others[1]].push_back(others[0]);
    }
    if (std::any_of(adj.begin(), adj.end(), [](const auto& kv) { return kv.second.size() != 2; })) continue;
    std::vector<Index> cycle{adj.begin()->first};
    Index prev = -1;
    while (true) {
      const auto& nb = adj[cycle.back()];
      Index next = nb[0] != prev ? nb[0] : nb[1];
      if (next == cycle.front()) break;
      prev = cycle.back();
      cycle.push_back(next);
      if (cycle.size() > adj.size()) break;
    }
    if (cycle.size() != adj.size()) continue;
    if (std::any_of(cycle.begin(), cycle.end(), [&](Index v) { return touched[v] != 0; })) continue;
    const std::size_t n = cycle.size();
    bool placed = false;
    for (std::size_t ci = 0; ci < n && !placed; ++ci) {
      const Index c = cycle[ci];
      if (!on_boundary(f.vtag[c])) continue;
      // fan from c: edges to every link vertex except its two link neighbours
      bool crossing = false, clash = false;
      for (std::size_t s = 2; s + 1 < n; ++s) {
        const Index x = cycle[(ci + s) % n];
        if (f.edges.count(ekey(c, x))) clash = true;
        if (on_boundary(f.vtag[x])) crossing = true;
      }
      if (!crossing || clash) continue;
      const Index surface = f.tris[star[a][0]].surface;
      const Index attachment = f.tris[star[a][0]].attachment;
      for (std::size_t t : star[a]) tri_dead[t] = 1;
      for (Index x : cycle) f.edges.erase(ekey(a, x));
      for (std::size_t s = 2; s + 1 < n; ++s) {
        f.edges.emplace(ekey(c, cycle[(ci + s) % n]), Tag{TagKind::Interior, surface});
      }
      for (std::size_t s = 1; s + 1 < n; ++s) {
        std::array<Index, 3> v{c, cycle[(ci + s) % n], cycle[(ci + s + 1) % n]};
        std::sort(v.begin(), v.end());
        added.push_back({v, surface, attachment});
      }
      f.vertex_alive[a] = 0;
      touched[a] = 1;
      for (Index x : cycle) touched[x] = 1;
      placed = true;
      ++done;
    }
  }
  std::vector<FlatTri> kept;
  for (std::size_t t = 0; t < f.tris.size(); ++t) {
    if (!tri_dead[t]) kept.push_back(f.tris[t]);
  }
  kept.insert(kept.end(), added.begin(), added.end());
  f.tris = std::move(kept);
  return done;
}

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

}  // namespace

// --- labelling -----------------------------------------------------------------

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

std::vector<SubPolygon> decompose_polygons(const StratifoldMesh& sm, Index surface) {
  const auto& k = sm.mesh;
  const auto& fs = sm.structure.surface[2];
  std::vector<Index> parent(k.num_triangles());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const EdgeRole r = sm.edge_roles[e];
    if (r != EdgeRole::Internal && r != EdgeRole::Bridge) continue;
    auto cof = k.edge_cofacets(static_cast<Index>(e));
    for (std::size_t j = 1; j < cof.size(); ++j) {
      if (fs[cof[0]] != surface || fs[cof[j]] != surface) continue;
      Index a = find(cof[0]), b = find(cof[j]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<SubPolygon> out;
  std::unordered_map<Index, std::size_t> slot;
  for (std::size_t t = 0; t < k.num_triangles(); ++t) {
    if (fs[t] != surface) continue;
    const Index root = find(static_cast<Index>(t));
    auto [it, fresh] = slot.emplace(root, out.size());
    if (fresh) out.emplace_back();
    out[it->second].faces.push_back(static_cast<Index>(t));
  }
  return out;
}

void validate_mesh(const StratifoldMesh& sm) {
  const auto& k = sm.mesh;
  const auto& st = sm.structure;
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ValidationError, what); };
  try {
    k.check_invariants();
  } catch (const Error& e) {
    fail(e.what());
  }
  const std::size_t nv = k.num_vertices(), ne = k.num_edges(), nt = k.num_triangles();
  if (st.surface[0].size() != nv || st.surface[1].size() != ne || st.surface[2].size() != nt ||
      st.circle[0].size() != nv || st.circle[1].size() != ne || st.vertex_boundary.size() != nv ||
      st.edge_boundary.size() != ne || sm.vertex_roles.size() != nv || sm.edge_roles.size() != ne ||
      sm.polygon.size() != nt) {
    fail("annotation tables do not cover the mesh");
  }
  const auto ns = static_cast<Index>(st.num_surfaces);
  const auto nc = static_cast<Index>(st.circle_ids.size());
  if (ns < 1) fail("no surfaces");
  if (nc < 1) fail("no circles");
  std::vector<std::size_t> faces_per_surface(ns, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    const Index s = st.surface[2][t];
    if (s < 0 || s >= ns) fail("face " + spell(k, {2, static_cast<Index>(t)}) + " has no surface");
    ++faces_per_surface[s];
    if (sm.polygon[t].surface != s) fail("face " + spell(k, {2, static_cast<Index>(t)}) + " polygon/surface mismatch");
  }
  for (Index s = 0; s < ns; ++s) {
    if (faces_per_surface[s] == 0) fail("surface " + std::to_string(s) + " has no faces");
  }
  for (int d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      const Index s = st.surface[d][i], c = st.circle[d][i];
      const std::string who = spell(k, {d, static_cast<Index>(i)});
      if ((s >= 0) == (c >= 0)) fail(who + " must belong to exactly one surface or one circle");
      if (s >= ns || c >= nc) fail(who + " has an out-of-range membership");
      const bool boundary = d == 0 ? st.vertex_boundary[i] : st.edge_boundary[i];
      if (c >= 0 && !boundary) fail(who + " lies on a circle but is not marked boundary");
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const VertexRole want = st.vertex_boundary[v] ? VertexRole::PolygonBoundary : VertexRole::Internal;
    if (sm.vertex_roles[v] != want) fail("vertex " + std::to_string(v) + " has the wrong role");
  }
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& ed = k.edge(static_cast<Index>(e));
    const bool b0 = sm.vertex_roles[ed[0]] == VertexRole::PolygonBoundary;
    const bool b1 = sm.vertex_roles[ed[1]] == VertexRole::PolygonBoundary;
    EdgeRole want;
    if (st.edge_boundary[e]) {
      if (!b0 || !b1) fail("boundary edge " + spell(k, {1, static_cast<Index>(e)}) + " has an internal endpoint");
      want = EdgeRole::Boundary;
    } else if (b0 && b1) {
      want = EdgeRole::Crossing;
    } else if (b0 || b1) {
      want = EdgeRole::Bridge;
    } else {
      want = EdgeRole::Internal;
    }
    if (sm.edge_roles[e] != want) {
      fail("edge " + spell(k, {1, static_cast<Index>(e)}) + " is labelled " + role_letter(sm.edge_roles[e]) +
           " but its endpoints make it " + role_letter(want));
    }
  }
  // surface cells: manifold away from circles, memberships agree with faces
  for (std::size_t e = 0; e < ne; ++e) {
    auto cof = k.edge_cofacets(static_cast<Index>(e));
    const std::string who = spell(k, {1, static_cast<Index>(e)});
    if (st.circle[1][e] >= 0) {
      if (cof.size() < 3) fail("circle edge " + who + " has " + std::to_string(cof.size()) + " sheets, need > 2");
      continue;
    }
    if (cof.size() != 2) fail("surface edge " + who + " has " + std::to_string(cof.size()) + " faces, expected 2");
    for (Index t : cof) {
      if (st.surface[2][t] != st.surface[1][e]) fail("edge " + who + " and its faces disagree on the surface");
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (st.circle[0][v] >= 0) continue;
    for (Index e : k.vertex_cofacets(static_cast<Index>(v))) {
      if (st.surface[1][e] != st.surface[0][v]) {
        fail("vertex " + std::to_string(v) + " and edge " + spell(k, {1, e}) + " disagree on the surface");
      }
    }
  }
  // circles: simple cycles of length >= 3
  for (Index c = 0; c < nc; ++c) {
    std::vector<Index> verts, edges;
    for (std::size_t v = 0; v < nv; ++v) {
      if (st.circle[0][v] == c) verts.push_back(static_cast<Index>(v));
    }
    for (std::size_t e = 0; e < ne; ++e) {
      if (st.circle[1][e] == c) edges.push_back(static_cast<Index>(e));
    }
    const std::string who = "circle '" + st.circle_ids[c] + "'";
    if (edges.size() < 3) fail(who + " has " + std::to_string(edges.size()) + " edges; at least 3 required");
    std::map<Index, std::vector<Index>> adj;
    for (Index e : edges) {
      for (Index v : k.edge(e)) {
        if (st.circle[0][v] != c) fail(who + ": edge " + spell(k, {1, e}) + " leaves the circle");
        adj[v].push_back(e);
      }
    }
    if (adj.size() != verts.size()) fail(who + " has vertices without circle edges");
    for (const auto& [v, es] : adj) {
      if (es.size() != 2) fail(who + " is not a simple cycle at vertex " + std::to_string(v));
    }
    if (verts.size() != edges.size()) fail(who + " is not a simple cycle");
    // connectivity
    std::size_t steps = 0;
    Index v = verts.front(), via = -1;
    do {
      const auto& es = adj[v];
      const Index e = es[0] != via ? es[0] : es[1];
      v = k.other_endpoint(e, v);
      via = e;
      ++steps;
    } while (v != verts.front() && steps <= edges.size());
    if (steps != edges.size()) fail(who + " is not a single cycle");
  }
}

StratifoldMesh label_cells(SimplicialComplex2 mesh, CellStructure structure) {
  const auto& k = mesh;
  auto& st = structure;
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InconsistentStructure, what); };
  if (st.surface[0].size() != k.num_vertices() || st.surface[1].size() != k.num_edges() ||
      st.surface[2].size() != k.num_triangles() || st.circle[0].size() != k.num_vertices() ||
      st.circle[1].size() != k.num_edges() || st.vertex_boundary.size() != k.num_vertices() ||
      st.edge_boundary.size() != k.num_edges()) {
    bad("membership maps do not cover every cell");
  }
  for (int d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      const bool boundary = d == 0 ? st.vertex_boundary[i] : st.edge_boundary[i];
      if (st.circle[d][i] >= 0 && !boundary) bad(spell(k, {d, static_cast<Index>(i)}) + " is on a circle but not on the boundary");
    }
  }
  StratifoldMesh sm;
  sm.vertex_roles.resize(k.num_vertices());
  for (std::size_t v = 0; v < k.num_vertices(); ++v) {
    sm.vertex_roles[v] = st.vertex_boundary[v] ? VertexRole::PolygonBoundary : VertexRole::Internal;
  }
  sm.edge_roles.resize(k.num_edges());
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const auto& ed = k.edge(static_cast<Index>(e));
    const bool b0 = st.vertex_boundary[ed[0]], b1 = st.vertex_boundary[ed[1]];
    if (st.edge_boundary[e]) {
      if (!b0 || !b1) bad("edge " + spell(k, {1, static_cast<Index>(e)}) + " is claimed boundary but has an internal endpoint");
      sm.edge_roles[e] = EdgeRole::Boundary;
    } else if (b0 && b1) {
      sm.edge_roles[e] = EdgeRole::Crossing;
    } else if (b0 || b1) {
      sm.edge_roles[e] = EdgeRole::Bridge;
    } else {
      sm.edge_roles[e] = EdgeRole::Internal;
    }
  }
  sm.mesh = std::move(mesh);
  sm.structure = std::move(structure);
  sm.polygon.assign(sm.mesh.num_triangles(), PolygonId{});
  for (std::size_t s = 0; s < sm.structure.num_surfaces; ++s) {
    const auto polys = decompose_polygons(sm, static_cast<Index>(s));
    for (std::size_t p = 0; p < polys.size(); ++p) {
      for (Index t : polys[p].faces) sm.polygon[t] = {static_cast<Index>(s), static_cast<Index>(p)};
    }
  }
  validate_mesh(sm);
  return sm;
}

StratifoldMesh circles_reading(const StratifoldMesh& sm) {
  CellStructure st = sm.structure;
  for (std::size_t v = 0; v < st.vertex_boundary.size(); ++v) st.vertex_boundary[v] = st.circle[0][v] >= 0;
  for (std::size_t e = 0; e < st.edge_boundary.size(); ++e) st.edge_boundary[e] = st.circle[1][e] >= 0;
  return label_cells(sm.mesh, std::move(st));
}

std::vector<std::vector<std::int64_t>> circle_edge_sheets(const StratifoldMesh& sm) {
  const auto& k = sm.mesh;
  std::vector<std::vector<std::int64_t>> out(k.num_edges());
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    if (sm.structure.circle[1][e] < 0) continue;
    out[e].assign(sm.structure.num_surfaces, 0);
    for (Index t : k.edge_cofacets(static_cast<Index>(e))) ++out[e][sm.structure.surface[2][t]];
  }
  return out;
}

// --- generator -----------------------------------------------------------------

Triangulation triangulate_spec(const StratifoldSpec& spec, const TriangulateOptions& options) {
  require_valid(spec);
  require(options.fineness >= 0, ErrorCode::InvalidArgument, "fineness must be >= 0");
  require(options.chords >= 0, ErrorCode::InvalidArgument, "chords must be >= 0");
  for (const auto& [id, len] : options.circle_lengths) {
    require(std::find(spec.circles.begin(), spec.circles.end(), id) != spec.circles.end(), ErrorCode::InvalidArgument,
            "circle length given for unknown circle '" + id + "'");
  }
  std::vector<std::int64_t> lengths(spec.circles.size(), 3);
  for (std::size_t j = 0; j < spec.circles.size(); ++j) {
    auto it = options.circle_lengths.find(spec.circles[j]);
    if (it != options.circle_lengths.end()) lengths[j] = it->second;
    require(lengths[j] >= 3, ErrorCode::CircleTooShort,
            "circle '" + spec.circles[j] + "' has length " + std::to_string(lengths[j]) + ", need >= 3");
  }
  // size guard before building anything
  {
    long double sides = 0;
    for (const auto& s : spec.surfaces) {
      sides += s.orientable() ? 4.0L * s.genus : -2.0L * s.genus;
      for (const auto& a : s.attachments) sides += 2 + abs64(a.degree) * (long double)lengths[spec.circle_index(a.circle)];
    }
    long double tris = sides;
    for (int i = 0; i < 2 + options.fineness; ++i) tris *= 6;
    require(tris <= static_cast<long double>(options.max_triangles), ErrorCode::InvalidArgument,
            "requested triangulation would have about " + std::to_string(static_cast<long long>(tris)) +
                " triangles (limit " + std::to_string(options.max_triangles) + ")");
  }

  Delta d;
  std::vector<std::vector<Index>> circle_edges(spec.circles.size());
  std::vector<Index> circle_base(spec.circles.size());
  for (std::size_t j = 0; j < spec.circles.size(); ++j) {
    const Tag tag{TagKind::Circle, static_cast<Index>(j)};
    circle_base[j] = d.add_vertex(tag);
    for (std::int64_t t = 1; t < lengths[j]; ++t) d.add_vertex(tag);
    for (std::int64_t t = 0; t < lengths[j]; ++t) {
      const Index a = circle_base[j] + static_cast<Index>(t);
      const Index b = circle_base[j] + static_cast<Index>((t + 1) % lengths[j]);
      circle_edges[j].push_back(d.add_edge(a, b, tag));
    }
  }
  for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
    const auto& s = spec.surfaces[i];
    const auto si = static_cast<Index>(i);
    const Tag rim{TagKind::SurfaceBoundary, si};
    const Index base = d.add_vertex(rim);
    struct Side {
      Index edge;
      bool fwd;
      Index attachment;
    };
    std::vector<Side> word;
    if (s.orientable()) {
      for (std::int64_t h = 0; h < s.genus; ++h) {
        const Index a = d.add_edge(base, base, rim), b = d.add_edge(base, base, rim);
        word.insert(word.end(), {{a, true, -1}, {b, true, -1}, {a, false, -1}, {b, false, -1}});
      }
    } else {
      for (std::int64_t h = 0; h < -s.genus; ++h) {
        const Index a = d.add_edge(base, base, rim);
        word.insert(word.end(), {{a, true, -1}, {a, true, -1}});
      }
    }
    for (std::size_t j = 0; j < s.attachments.size(); ++j) {
      const auto& att = s.attachments[j];
      const std::size_t c = spec.circle_index(att.circle);
      const auto aj = static_cast<Index>(j);
      const Index bridge = d.add_edge(base, circle_base[c], rim);
      word.push_back({bridge, true, aj});
      for (std::int64_t r = 0; r < abs64(att.degree); ++r) {
        if (att.degree > 0) {
          for (Index e : circle_edges[c]) word.push_back({e, true, aj});
        } else {
          for (auto it = circle_edges[c].rbegin(); it != circle_edges[c].rend(); ++it) word.push_back({*it, false, aj});
        }
      }
      word.push_back({bridge, false, aj});
    }
    // corners of the polygon
    const std::size_t n = word.size();
    std::vector<Index> corner(n);
    Index at = base;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& ed = d.edge[word[k].edge];
      const Index from = word[k].fwd ? ed[0] : ed[1];
      if (from != at) throw Error(ErrorCode::InvariantViolation, "polygon word is not a closed walk");
      corner[k] = from;
      at = word[k].fwd ? ed[1] : ed[0];
    }
    if (at != base) throw Error(ErrorCode::InvariantViolation, "polygon word does not close up");
    const Index center = d.add_vertex({TagKind::Interior, si});
    std::vector<Index> spoke(n);
    for (std::size_t k = 0; k < n; ++k) spoke[k] = d.add_edge(center, corner[k], {TagKind::Interior, si});
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k1 = (k + 1) % n;
      d.tris.push_back({{corner[k], corner[k1], center},
                        {word[k].edge, spoke[k1], spoke[k]},
                        {word[k].fwd, false, true},
                        si,
                        word[k].attachment});
    }
  }
  for (int r = 0; r < 2 + options.fineness; ++r) d = subdivide(d);

  Flat flat = flatten(d);
  insert_chords(flat, options.chords);

  // compact vertex ids and build the complex
  std::vector<Index> dense(flat.vtag.size(), -1);
  Index next = 0;
  for (std::size_t v = 0; v < flat.vtag.size(); ++v) {
    if (flat.vertex_alive[v]) dense[v] = next++;
  }
  std::vector<std::vector<Index>> simplices;
  simplices.reserve(next + flat.edges.size() + flat.tris.size());
  for (Index v = 0; v < next; ++v) simplices.push_back({v});
  for (const auto& [key, tag] : flat.edges) simplices.push_back({dense[key[0]], dense[key[1]]});
  for (const auto& t : flat.tris) simplices.push_back({dense[t.v[0]], dense[t.v[1]], dense[t.v[2]]});
  SimplicialComplex2 k = build_complex(simplices);
  if (k.num_edges() != flat.edges.size() || k.num_triangles() != flat.tris.size()) {
    throw Error(ErrorCode::InvariantViolation, "flat triangulation is not closed");
  }

  CellStructure st;
  st.circle_ids = spec.circles;
  st.num_surfaces = spec.surfaces.size();
  st.surface[0].assign(k.num_vertices(), -1);
  st.circle[0].assign(k.num_vertices(), -1);
  st.vertex_boundary.assign(k.num_vertices(), 0);
  for (std::size_t v = 0; v < flat.vtag.size(); ++v) {
    if (dense[v] < 0) continue;
    const Tag& t = flat.vtag[v];
    (t.kind == TagKind::Circle ? st.circle[0] : st.surface[0])[dense[v]] = t.index;
    st.vertex_boundary[dense[v]] = on_boundary(t);
  }
  st.surface[1].assign(k.num_edges(), -1);
  st.circle[1].assign(k.num_edges(), -1);
  st.edge_boundary.assign(k.num_edges(), 0);
  for (const auto& [key, t] : flat.edges) {
    const Index e = *k.find_edge(dense[key[0]], dense[key[1]]);
    (t.kind == TagKind::Circle ? st.circle[1] : st.surface[1])[e] = t.index;
    st.edge_boundary[e] = on_boundary(t);
  }
  st.surface[2].assign(k.num_triangles(), -1);
  std::vector<Index> face_attachment(k.num_triangles(), -1);
  for (const auto& t : flat.tris) {
    const Index f = *k.find_triangle(dense[t.v[0]], dense[t.v[1]], dense[t.v[2]]);
    st.surface[2][f] = t.surface;
    face_attachment[f] = t.attachment;
  }
  Triangulation out;
  out.mesh = label_cells(std::move(k), std::move(st));
  out.face_attachment = std::move(face_attachment);
  return out;
}

// --- files -------------------------------------------------------------------

void write_annotations(std::ostream& out, const StratifoldMesh& sm) {
  const auto& k = sm.mesh;
  const auto& st = sm.structure;
  out << "# roles\n";
  for (std::size_t v = 0; v < k.num_vertices(); ++v) out << "vrole " << v << ' ' << role_letter(sm.vertex_roles[v]) << '\n';
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const auto& ed = k.edge(static_cast<Index>(e));
    out << "erole " << ed[0] << ' ' << ed[1] << ' ' << role_letter(sm.edge_roles[e]) << '\n';
  }
  out << "# circles\n";
  for (std::size_t c = 0; c < st.circle_ids.size(); ++c) {
    for (int d = 0; d < 2; ++d) {
      for (std::size_t i = 0; i < k.num_cells(d); ++i) {
        if (st.circle[d][i] == static_cast<Index>(c)) {
          out << "circ " << spell(k, {d, static_cast<Index>(i)}) << ' ' << st.circle_ids[c] << '\n';
        }
      }
    }
  }
  out << "# surfaces\n";
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      if (st.surface[d][i] >= 0) out << "surf " << spell(k, {d, static_cast<Index>(i)}) << ' ' << st.surface[d][i] << '\n';
    }
  }
  out << "# polygons\n";
  for (std::size_t t = 0; t < k.num_triangles(); ++t) {
    out << "poly " << spell(k, {2, static_cast<Index>(t)}) << ' ' << sm.polygon[t].surface << ' '
        << sm.polygon[t].polygon << '\n';
  }
}

StratifoldMesh import_mesh(std::istream& mesh_in, std::istream& annotation_in) {
  std::vector<std::int64_t> original;
  SimplicialComplex2 k = complex_from_records(parse_mesh_records(mesh_in), &original);
  const std::size_t nv = k.num_vertices(), ne = k.num_edges(), nt = k.num_triangles();
  auto invalid = [](const std::string& what) { throw Error(ErrorCode::ValidationError, what); };

  std::size_t lineno = 0;
  auto parse_fail = [&](const std::string& what) {
    throw Error(ErrorCode::ParseError, "annotation line " + std::to_string(lineno) + ": " + what);
  };
  auto vertex = [&](std::istringstream& ss) -> Index {
    std::int64_t id;
    if (!(ss >> id)) parse_fail("expected a vertex id");
    auto it = std::lower_bound(original.begin(), original.end(), id);
    if (it == original.end() || *it != id) invalid("annotation names unknown vertex " + std::to_string(id));
    return static_cast<Index>(it - original.begin());
  };
  auto cell = [&](std::istringstream& ss) -> CellRef {
    std::string tag;
    if (!(ss >> tag)) parse_fail("expected a cell");
    const std::size_t n = tag == "v" ? 1 : tag == "e" ? 2 : tag == "t" ? 3 : 0;
    if (n == 0) parse_fail("unknown cell tag '" + tag + "'");
    Cell c;
    for (std::size_t i = 0; i < n; ++i) c.vertices.push_back(vertex(ss));
    std::sort(c.vertices.begin(), c.vertices.end());
    auto ref = k.find(c);
    if (!ref) invalid("annotation names a cell that is not in the mesh");
    return *ref;
  };
  auto integer = [&](std::istringstream& ss) -> std::int64_t {
    std::int64_t x;
    if (!(ss >> x)) parse_fail("expected an integer");
    return x;
  };

  std::vector<int> vrole(nv, -1), erole(ne, -1);
  std::array<std::vector<Index>, 3> surf{std::vector<Index>(nv, -1), std::vector<Index>(ne, -1),
                                         std::vector<Index>(nt, -1)};
  std::array<std::vector<Index>, 2> circ{std::vector<Index>(nv, -1), std::vector<Index>(ne, -1)};
  std::vector<PolygonId> poly(nt);
  std::vector<std::string> circle_ids;
  Index max_surface = -1;

  std::string line;
  while (std::getline(annotation_in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    if (kw == "vrole") {
      const Index v = vertex(ss);
      std::string r;
      if (!(ss >> r) || (r != "B" && r != "I")) parse_fail("vertex role must be B or I");
      if (vrole[v] != -1) invalid("vertex " + std::to_string(original[v]) + " has two roles");
      vrole[v] = r == "B" ? 0 : 1;
    } else if (kw == "erole") {
      const Index a = vertex(ss), b = vertex(ss);
      std::string r;
      if (!(ss >> r) || r.size() != 1 || std::string("BXDI").find(r[0]) == std::string::npos) {
        parse_fail("edge role must be B, X, D or I");
      }
      auto e = k.find_edge(a, b);
      if (!e) invalid("erole names an edge that is not in the mesh");
      if (erole[*e] != -1) invalid("edge has two roles");
      erole[*e] = static_cast<int>(std::string("BXDI").find(r[0]));
    } else if (kw == "surf") {
      const CellRef c = cell(ss);
      const std::int64_t s = integer(ss);
      if (s < 0) invalid("negative surface index");
      if (surf[c.dim][c.index] != -1) invalid(spell(k, c) + " has two surfaces");
      surf[c.dim][c.index] = static_cast<Index>(s);
      max_surface = std::max(max_surface, static_cast<Index>(s));
    } else if (kw == "circ") {
      const CellRef c = cell(ss);
      std::string id;
      if (!(ss >> id)) parse_fail("expected a circle id");
      if (c.dim > 1) invalid("a face cannot lie on a circle");
      auto it = std::find(circle_ids.begin(), circle_ids.end(), id);
      if (it == circle_ids.end()) it = circle_ids.insert(circle_ids.end(), id);
      if (circ[c.dim][c.index] != -1) invalid(spell(k, c) + " lies on two circles");
      circ[c.dim][c.index] = static_cast<Index>(it - circle_ids.begin());
    } else if (kw == "poly") {
      const CellRef c = cell(ss);
      if (c.dim != 2) invalid("poly must name a face");
      const std::int64_t s = integer(ss), p = integer(ss);
      if (poly[c.index].surface != -1) invalid(spell(k, c) + " has two polygons");
      poly[c.index] = {static_cast<Index>(s), static_cast<Index>(p)};
    } else {
      parse_fail("unknown record '" + kw + "'");
    }
    std::string extra;
    if (ss >> extra) parse_fail("trailing token '" + extra + "'");
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (vrole[v] < 0) invalid("vertex " + std::to_string(original[v]) + " has no role");
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (erole[e] < 0) invalid("edge " + spell(k, {1, static_cast<Index>(e)}) + " has no role");
  }
  for (std::size_t t = 0; t < nt; ++t) {
    if (poly[t].surface < 0) invalid("face " + spell(k, {2, static_cast<Index>(t)}) + " has no polygon");
  }

  CellStructure st;
  st.circle_ids = circle_ids;
  st.num_surfaces = static_cast<std::size_t>(max_surface + 1);
  st.surface = surf;
  st.circle = circ;
  st.vertex_boundary.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) st.vertex_boundary[v] = vrole[v] == 0;
  st.edge_boundary.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) st.edge_boundary[e] = erole[e] == 0;

  StratifoldMesh sm;
  try {
    sm = label_cells(std::move(k), std::move(st));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InconsistentStructure) invalid(e.what());
    throw;
  }
  static constexpr EdgeRole kRoles[] = {EdgeRole::Boundary, EdgeRole::Crossing, EdgeRole::Bridge, EdgeRole::Internal};
  for (std::size_t e = 0; e < ne; ++e) {
    if (sm.edge_roles[e] != kRoles[erole[e]]) {
      invalid("edge " + spell(sm.mesh, {1, static_cast<Index>(e)}) + " is annotated " + role_letter(kRoles[erole[e]]) +
              " but its endpoints make it " + role_letter(sm.edge_roles[e]));
    }
  }
  // the annotated polygon partition must match the computed one
  std::map<std::pair<Index, Index>, Index> rename;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto key = std::make_pair(poly[t].surface, poly[t].polygon);
    auto it = rename.emplace(key, sm.polygon[t].polygon).first;
    if (poly[t].surface != sm.polygon[t].surface || it->second != sm.polygon[t].polygon) {
      invalid("face " + spell(sm.mesh, {2, static_cast<Index>(t)}) + " is in the wrong polygon");
    }
  }
  if (rename.size() != [&] {
        std::set<std::pair<Index, Index>> ids;
        for (const auto& p : sm.polygon) ids.insert({p.surface, p.polygon});
        return ids.size();
      }()) {
    invalid("polygon annotation does not match the decomposition along crossing edges");
  }
  return sm;
}

StratifoldMesh import_mesh_files(const std::string& mesh_path, const std::string& annotation_path) {
  std::ifstream m(mesh_path);
  if (!m) throw Error(ErrorCode::ParseError, "cannot open " + mesh_path);
  std::ifstream a(annotation_path);
  if (!a) throw Error(ErrorCode::ParseError, "cannot open " + annotation_path);
  return import_mesh(m, a);
}

}  // namespace stratmorse
