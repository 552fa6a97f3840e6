#include "stratmorse/optimizer.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "stratmorse/error.hpp"
#include "stratmorse/oracle.hpp"

namespace stratmorse {

std::string_view to_string(BoundaryReading r) { return r == BoundaryReading::Polygon ? "polygon" : "circles"; }

BoundaryReading parse_boundary_reading(const std::string& text) {
  if (text == "polygon") return BoundaryReading::Polygon;
  if (text == "circles") return BoundaryReading::Circles;
  throw Error(ErrorCode::InvalidArgument, "boundary reading must be 'polygon' or 'circles', got '" + text + "'");
}

std::string_view to_string(Optimality o) {
  switch (o) {
    case Optimality::TwistedTheorem: return "TwistedTheorem";
    case Optimality::OracleCertified: return "OracleCertified";
    case Optimality::OracleRefuted: return "OracleRefuted";
    case Optimality::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool DualGraph::connected() const {
  if (faces.empty()) return true;
  std::vector<Index> parent(faces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = faces.size();
  for (const auto& a : arcs) {
    Index x = find(a.a), y = find(a.b);
    if (x != y) {
      parent[x] = y;
      --comps;
    }
  }
  return comps == 1;
}

namespace {

bool dual_edge(EdgeRole r) { return r == EdgeRole::Internal || r == EdgeRole::Bridge; }

// Arcs across the accepted edges among `faces`; each edge contributes at most
// one arc between its two cofaces. `where` is scratch space indexed by face,
// all -1 on entry and on exit.
template <class Accept>
DualGraph collect_dual(const StratifoldMesh& sm, const std::vector<Index>& faces, Accept accept,
                       std::vector<Index>& where, std::size_t& steps) {
  const auto& k = sm.mesh;
  DualGraph g;
  g.faces = faces;
  for (std::size_t i = 0; i < faces.size(); ++i) where[faces[i]] = static_cast<Index>(i);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (Index e : k.triangle_edges(faces[i])) {
      ++steps;
      if (!accept(e)) continue;
      auto cof = k.edge_cofacets(e);
      if (cof.size() != 2 || cof[0] != faces[i]) continue;
      const Index other = where[cof[1]];
      if (other < 0) continue;
      g.arcs.push_back({static_cast<Index>(i), other, e});
    }
  }
  for (Index f : faces) where[f] = -1;
  return g;
}

std::string describe_dual(const StratifoldMesh& sm, const DualGraph& g, Index surface, Index polygon) {
  (void)sm;
  return "surface " + std::to_string(surface) + (polygon >= 0 ? ", polygon " + std::to_string(polygon) : "") + ": " +
         std::to_string(g.faces.size()) + " faces, " + std::to_string(g.arcs.size()) + " arcs, " +
         (g.connected() ? "connected" : "disconnected");
}

}  // namespace

DualGraph dual_graph(const StratifoldMesh& sm, const SubPolygon& polygon, const std::vector<char>& tree_edge) {
  std::size_t steps = 0;
  std::vector<Index> faces = polygon.faces;
  std::sort(faces.begin(), faces.end());
  std::vector<Index> where(sm.mesh.num_triangles(), -1);
  return collect_dual(
      sm, faces, [&](Index e) { return dual_edge(sm.edge_roles[e]) && !tree_edge[e]; }, where, steps);
}

GradientResult optimal_gradient(const StratifoldMesh& input, BoundaryReading reading) {
  std::optional<StratifoldMesh> relabelled;
  if (reading == BoundaryReading::Circles) relabelled = circles_reading(input);
  const StratifoldMesh& sm = relabelled ? *relabelled : input;
  const auto& k = sm.mesh;
  const std::size_t ns = sm.structure.num_surfaces;

  GradientResult out;
  out.reading = reading;
  Matching m(k);
  auto pair = [&](CellRef lo, CellRef hi) {
    if (m.is_matched(lo) || m.is_matched(hi)) {
      throw Error(ErrorCode::InvariantViolation,
                  "stages overlap: " + spell(k, lo) + " or " + spell(k, hi) + " is already paired");
    }
    m.pair(lo, hi);
  };
  std::vector<char> tree_edge(k.num_edges(), 0);
  std::vector<char> seen(k.num_vertices(), 0);
  std::size_t& steps = out.steps;

  // Breadth-first tree over internal edges from `start`, pairing each tree
  // edge with its far endpoint.
  std::deque<Index> queue;
  auto grow_internal_tree = [&](Index start) {
    queue.assign(1, start);
    seen[start] = 1;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index e : k.vertex_cofacets(u)) {
        ++steps;
        if (sm.edge_roles[e] != EdgeRole::Internal) continue;
        const Index w = k.other_endpoint(e, u);
        if (seen[w]) continue;
        seen[w] = 1;
        tree_edge[e] = 1;
        pair({0, w}, {1, e});
        queue.push_back(w);
      }
    }
  };

  // sub-polygons straight from the per-face labels, faces in increasing order
  std::vector<std::vector<SubPolygon>> polygons(ns);
  std::vector<std::vector<Index>> surface_faces(ns);
  for (std::size_t f = 0; f < k.num_triangles(); ++f) {
    ++steps;
    const PolygonId id = sm.polygon[f];
    surface_faces[id.surface].push_back(static_cast<Index>(f));
    auto& list = polygons[id.surface];
    if (static_cast<std::size_t>(id.polygon) >= list.size()) list.resize(id.polygon + 1);
    list[id.polygon].faces.push_back(static_cast<Index>(f));
  }
  for (const auto& list : polygons) out.polygons_per_surface.push_back(list.size());
  std::vector<Index> where(k.num_triangles(), -1);
  std::vector<Index> comp, offsets, fill, adjacent;
  std::vector<char> reached;

  for (std::size_t s = 0; s < ns; ++s) {
    const auto si = static_cast<Index>(s);
    // step 1.1: vertex trees, one per component of the internal graph
    for (const auto& poly : polygons[s]) {
      for (Index f : poly.faces) {
        for (Index v0 : k.triangle(f)) {
          ++steps;
          if (sm.vertex_roles[v0] != VertexRole::Internal || seen[v0]) continue;
          // the component, its smallest vertex and its smallest bridge
          comp.assign(1, v0);
          seen[v0] = 2;
          Index bridge = -1, inner = -1, smallest = v0;
          for (std::size_t h = 0; h < comp.size(); ++h) {
            const Index u = comp[h];
            smallest = std::min(smallest, u);
            for (Index e : k.vertex_cofacets(u)) {
              ++steps;
              const EdgeRole r = sm.edge_roles[e];
              const Index w = k.other_endpoint(e, u);
              if (r == EdgeRole::Bridge) {
                if (bridge < 0 || e < bridge) {
                  bridge = e;
                  inner = u;
                }
              } else if (r == EdgeRole::Internal && seen[w] == 0) {
                seen[w] = 2;
                comp.push_back(w);
              }
            }
          }
          for (Index u : comp) seen[u] = 0;
          if (bridge >= 0) {
            tree_edge[bridge] = 1;
            pair({0, inner}, {1, bridge});
            grow_internal_tree(inner);
          } else {
            grow_internal_tree(smallest);  // stays critical; the repair pass handles it
          }
        }
      }
    }
    // steps 1.1.4 and 1.2: dual trees per polygon, joined across crossing edges
    const std::vector<Index>& faces = surface_faces[s];
    for (std::size_t p = 0; p < polygons[s].size(); ++p) {
      const auto& poly = polygons[s][p];
      DualGraph g = collect_dual(
          sm, poly.faces, [&](Index e) { return dual_edge(sm.edge_roles[e]) && !tree_edge[e]; }, where, steps);
      if (!g.is_tree()) {
        if (reading == BoundaryReading::Polygon) {
          throw Error(ErrorCode::DualNotTree, describe_dual(sm, g, si, static_cast<Index>(p)));
        }
        out.dual_fallback = true;
      }
    }
    DualGraph whole = collect_dual(
        sm, faces,
        [&](Index e) {
          const EdgeRole r = sm.edge_roles[e];
          return (dual_edge(r) && !tree_edge[e]) || r == EdgeRole::Crossing;
        },
        where, steps);
    if (!whole.is_tree()) {
      if (reading == BoundaryReading::Polygon) throw Error(ErrorCode::DualNotTree, describe_dual(sm, whole, si, -1));
      out.dual_fallback = true;
    }
    // step 1.3: root at the smallest face, pair each arc's edge with its child
    const std::size_t nf = whole.faces.size();
    offsets.assign(nf + 1, 0);
    for (const auto& arc : whole.arcs) {
      ++offsets[arc.a + 1];
      ++offsets[arc.b + 1];
    }
    for (std::size_t i = 0; i < nf; ++i) offsets[i + 1] += offsets[i];
    adjacent.resize(2 * whole.arcs.size());
    fill.assign(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < whole.arcs.size(); ++i) {
      adjacent[fill[whole.arcs[i].a]++] = static_cast<Index>(i);
      adjacent[fill[whole.arcs[i].b]++] = static_cast<Index>(i);
    }
    reached.assign(nf, 0);
    for (std::size_t r = 0; r < nf; ++r) {
      if (reached[r]) continue;
      reached[r] = 1;
      queue.assign(1, static_cast<Index>(r));
      while (!queue.empty()) {
        const Index x = queue.front();
        queue.pop_front();
        for (Index i = offsets[x]; i < offsets[x + 1]; ++i) {
          ++steps;
          const auto& arc = whole.arcs[adjacent[i]];
          const Index y = arc.a == x ? arc.b : arc.a;
          if (reached[y]) continue;
          reached[y] = 1;
          pair({1, arc.edge}, {2, whole.faces[y]});
          queue.push_back(y);
        }
      }
    }
  }

  // step 2: spanning forest of the boundary graph
  for (std::size_t v = 0; v < k.num_vertices(); ++v) {
    ++steps;
    if (sm.vertex_roles[v] != VertexRole::PolygonBoundary || seen[v]) continue;
    seen[v] = 1;
    queue.assign(1, static_cast<Index>(v));
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index e : k.vertex_cofacets(u)) {
        ++steps;
        if (sm.edge_roles[e] != EdgeRole::Boundary) continue;
        const Index w = k.other_endpoint(e, u);
        if (seen[w]) continue;
        seen[w] = 1;
        pair({0, w}, {1, e});
        queue.push_back(w);
      }
    }
  }

  // step 3
  if (auto p = find_closed_vpath(m)) {
    std::string s;
    for (const auto& c : p->cells) s += (s.empty() ? "" : " ") + spell(k, c);
    throw Error(ErrorCode::ClosedPathExists, s);
  }
  steps += k.num_cells();

  // step 4: cancel surplus critical vertices against connecting critical edges
  MorseVector counts = m.counts();
  if (counts.m0 > 1) {
    out.repair = true;
    // basin of each vertex = critical vertex reached by following the field
    std::vector<Index> basin(k.num_vertices(), -1);
    for (std::size_t v0 = 0; v0 < k.num_vertices(); ++v0) {
      if (basin[v0] >= 0) continue;
      std::vector<Index> path;
      Index v = static_cast<Index>(v0);
      while (basin[v] < 0) {
        path.push_back(v);
        const Index e = m.up({0, v});
        if (e < 0) {
          basin[v] = v;
          break;
        }
        v = k.other_endpoint(e, v);
      }
      for (Index x : path) basin[x] = basin[v];
    }
    std::vector<Index> parent(k.num_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Index x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    // critical vertex currently representing each merged basin
    std::vector<Index> rep(k.num_vertices());
    std::iota(rep.begin(), rep.end(), 0);
    for (std::size_t e = 0; e < k.num_edges() && counts.m0 > 1; ++e) {
      const CellRef edge{1, static_cast<Index>(e)};
      if (m.is_matched(edge)) continue;
      const auto& ed = k.edge(edge.index);
      const Index a = find(basin[ed[0]]), b = find(basin[ed[1]]);
      if (a == b) continue;
      // keep the smaller critical vertex
      Index drop = rep[a], keep = rep[b];
      if (drop < keep) std::swap(drop, keep);
      if (cancel_in_place(m, {0, drop}, edge) != 1) {
        throw Error(ErrorCode::RepairFailed, "no unique gradient path from " + spell(k, edge) + " to v " +
                                                 std::to_string(drop));
      }
      parent[a] = b;
      rep[b] = keep;
      ++out.cancellations;
      --counts.m0;
      --counts.m1;
    }
    if (counts.m0 > 1) throw Error(ErrorCode::RepairFailed, std::to_string(counts.m0) + " critical vertices remain");
    if (auto p = find_closed_vpath(m)) throw Error(ErrorCode::ClosedPathExists, "after repair");
  }

  out.m = m.counts();
  out.critical = m.critical();
  out.field = m.to_field();
  if (out.m.m0 != 1) {
    throw Error(ErrorCode::InvariantViolation, std::to_string(out.m.m0) + " critical vertices, expected 1");
  }
  if (out.m.m2 != static_cast<std::int64_t>(ns)) {
    throw Error(ErrorCode::InvariantViolation, std::to_string(out.m.m2) + " critical faces, expected " +
                                                   std::to_string(ns));
  }
  return out;
}

std::vector<Coefficients> default_coefficients() {
  return {Coefficients::rationals(), Coefficients::integers(), Coefficients::prime_field(2),
          Coefficients::prime_field(3), Coefficients::prime_field(5)};
}

void check_mesh_matches_spec(const StratifoldMesh& sm, const StratifoldSpec& spec) {
  require_valid(spec);
  auto fail = [](const std::string& what) { throw Error(ErrorCode::MismatchedSpec, what); };
  const auto& st = sm.structure;
  const auto& k = sm.mesh;
  if (st.num_surfaces != spec.surfaces.size()) {
    fail("mesh has " + std::to_string(st.num_surfaces) + " surfaces, spec has " + std::to_string(spec.surfaces.size()));
  }
  std::vector<std::string> a = st.circle_ids, b = spec.circles;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) fail("circle ids differ between mesh and spec");
  if (euler_characteristic(k) != euler_from_spec(spec)) {
    fail("Euler characteristic " + std::to_string(euler_characteristic(k)) + " differs from the spec's " +
         std::to_string(euler_from_spec(spec)));
  }
  std::vector<std::int64_t> chi(st.num_surfaces, 0);
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      const Index s = st.surface[d][i];
      if (s >= 0) chi[s] += d == 1 ? -1 : 1;
    }
  }
  for (std::size_t s = 0; s < st.num_surfaces; ++s) {
    if (chi[s] != surface_euler(spec.surfaces[s])) {
      fail("surface " + std::to_string(s) + " has Euler characteristic " + std::to_string(chi[s]) + ", spec says " +
           std::to_string(surface_euler(spec.surfaces[s])));
    }
  }
  // covering degrees: per circle edge and surface, the number of sheets
  std::vector<std::vector<std::int64_t>> expected(spec.surfaces.size(), std::vector<std::int64_t>(spec.circles.size(), 0));
  for (std::size_t s = 0; s < spec.surfaces.size(); ++s) {
    for (const auto& att : spec.surfaces[s].attachments) {
      expected[s][spec.circle_index(att.circle)] += att.degree < 0 ? -att.degree : att.degree;
    }
  }
  const auto sheets = circle_edge_sheets(sm);
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const Index c = st.circle[1][e];
    if (c < 0) continue;
    const std::size_t sc = spec.circle_index(st.circle_ids[c]);
    for (std::size_t s = 0; s < spec.surfaces.size(); ++s) {
      if (sheets[e][s] != expected[s][sc]) {
        fail("circle edge " + spell(k, {1, static_cast<Index>(e)}) + " has " + std::to_string(sheets[e][s]) +
             " sheets from surface " + std::to_string(s) + ", spec says " + std::to_string(expected[s][sc]));
      }
    }
  }
}

MorseReport verify_report(const GradientResult& g, const StratifoldMesh& sm, const StratifoldSpec* spec,
                          const std::vector<Coefficients>& coefficients, const OracleResult* oracle) {
  const auto& k = sm.mesh;
  MorseReport r;
  r.m = g.m;
  r.critical = g.critical;
  r.repair = g.repair;

  auto field_matching = Matching::from_field(g.field, k);
  if (!field_matching) {
    r.violations.push_back("emitted field is not a matching");
  } else {
    if (find_closed_vpath(*field_matching)) r.violations.push_back("emitted field has a closed V-path");
    if (field_matching->counts() != g.m) r.violations.push_back("critical counts disagree with the field");
  }

  std::vector<Coefficients> systems = coefficients;
  if (spec) {
    check_mesh_matches_spec(sm, *spec);
    r.type = classify(*spec);
    r.predicted = predicted_morse_vector(*spec);
    if (r.type->witness_prime) {
      const auto wp = Coefficients::prime_field(*r.type->witness_prime);
      if (std::find(systems.begin(), systems.end(), wp) == systems.end()) systems.push_back(wp);
    }
  }
  const std::int64_t chi = euler_characteristic(k);
  for (const auto& c : systems) {
    InequalityCheck check{c, betti(k, c), false};
    check.holds = check_morse_inequalities(g.m, check.betti, chi);
    if (!check.holds) r.violations.push_back("Morse inequalities fail over " + c.name());
    const bool equal = check.betti.b[0] == g.m.m0 && check.betti.b[1] == g.m.m1 && check.betti.b[2] == g.m.m2;
    if (equal && check.betti.torsion.empty()) r.perfect.push_back(c);
    if (spec) {
      const BettiVector cw = cw_betti(*spec, c);
      if (cw.b != check.betti.b || cw.torsion != check.betti.torsion) {
        r.violations.push_back("CW and simplicial homology disagree over " + c.name());
      }
    }
    r.checks.push_back(std::move(check));
  }

  if (oracle) {
    r.oracle_minimum = oracle->minimum;
    r.oracle_exhausted = oracle->exhausted;
    if (oracle->minimum > g.m.total()) r.violations.push_back("oracle minimum exceeds an achieved field");
  }

  if (spec) {
    const StratifoldKind kind = r.type->kind;
    if (*r.predicted != g.m) r.violations.push_back("critical counts differ from the predicted Morse vector");
    auto perfect_over = [&](std::uint32_t p) {
      return std::any_of(r.perfect.begin(), r.perfect.end(), [&](const Coefficients& c) {
        return c.kind() == Coefficients::Kind::PrimeField && c.prime() == p;
      });
    };
    switch (kind) {
      case StratifoldKind::Type1:
      case StratifoldKind::Type3:
        if (!perfect_over(*r.type->witness_prime)) {
          r.violations.push_back("expected a perfect field over F" + std::to_string(*r.type->witness_prime));
        }
        break;
      case StratifoldKind::Type2:
      case StratifoldKind::Type4:
        if (!r.perfect.empty()) r.violations.push_back("a field on a Type2/Type4 space cannot be perfect");
        break;
      case StratifoldKind::NotTwisted:
        break;
    }
    if (kind != StratifoldKind::NotTwisted) {
      r.optimal = Optimality::TwistedTheorem;
      if (oracle && oracle->exhausted && oracle->minimum != g.m.total()) {
        r.violations.push_back("oracle minimum " + std::to_string(oracle->minimum) + " differs from " +
                               std::to_string(g.m.total()));
      }
    }
  }
  if (r.optimal == Optimality::Unknown && oracle) {
    if (oracle->minimum < g.m.total()) {
      r.optimal = Optimality::OracleRefuted;
    } else if (oracle->exhausted) {
      r.optimal = Optimality::OracleCertified;
    }
  }
  return r;
}

}  // namespace stratmorse
