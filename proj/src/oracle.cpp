#include "stratmorse/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "stratmorse/error.hpp"
#include "stratmorse/homology.hpp"

namespace stratmorse {

namespace {

// Faces still present and the number of present cofaces per edge. Removals
// are logged so the search can roll back.
class Core {
 public:
  explicit Core(const SimplicialComplex2& k) : k_(k), alive_(k.num_triangles(), 1), count_(k.num_edges(), 0) {
    for (std::size_t e = 0; e < k.num_edges(); ++e) count_[e] = k.edge_cofacets(static_cast<Index>(e)).size();
    alive_count_ = k.num_triangles();
  }

  std::size_t mark() const { return log_.size(); }
  void rollback(std::size_t to) {
    while (log_.size() > to) {
      const Index f = log_.back().face;
      log_.pop_back();
      alive_[f] = 1;
      ++alive_count_;
      for (Index e : k_.triangle_edges(f)) ++count_[e];
    }
  }

  /// Removes f, then collapses every face that becomes free.
  void remove(Index f, Index free_edge = -1) {
    drop(f, free_edge);
    collapse();
  }

  void collapse() {
    while (!pending_.empty()) {
      const Index e = pending_.back();
      pending_.pop_back();
      if (count_[e] != 1) continue;
      for (Index f : k_.edge_cofacets(e)) {
        if (alive_[f]) {
          drop(f, e);
          break;
        }
      }
    }
  }

  void collapse_all() {
    for (std::size_t e = 0; e < count_.size(); ++e) {
      if (count_[e] == 1) pending_.push_back(static_cast<Index>(e));
    }
    collapse();
  }

  bool alive(Index f) const { return alive_[f]; }
  bool empty() const { return alive_count_ == 0; }

  struct Entry {
    Index face;
    Index edge;  // free edge that collapsed it, -1 for a removed face
  };
  const std::vector<Entry>& log() const { return log_; }

 private:
  void drop(Index f, Index edge) {
    alive_[f] = 0;
    --alive_count_;
    log_.push_back({f, edge});
    for (Index e : k_.triangle_edges(f)) {
      if (--count_[e] == 1) pending_.push_back(e);
    }
  }

  const SimplicialComplex2& k_;
  std::vector<char> alive_;
  std::vector<std::size_t> count_;
  std::size_t alive_count_ = 0;
  std::vector<Entry> log_;
  std::vector<Index> pending_;
};

struct Search {
  Core& core;
  std::size_t faces;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  std::vector<Index> chosen;

  bool run(std::size_t depth, Index after) {
    if (core.empty()) return true;
    if (depth == 0) return false;
    for (std::size_t f = static_cast<std::size_t>(after + 1); f < faces; ++f) {
      if (!core.alive(static_cast<Index>(f))) continue;
      if (++nodes > budget) {
        out_of_budget = true;
        return false;
      }
      const std::size_t m = core.mark();
      core.remove(static_cast<Index>(f));
      chosen.push_back(static_cast<Index>(f));
      if (run(depth - 1, static_cast<Index>(f))) return true;
      chosen.pop_back();
      core.rollback(m);
      if (out_of_budget) return false;
    }
    return false;
  }
};

// Collapse pairs for the faces outside `removed`, then a spanning forest on the
// edges left over.
DiscreteVectorField witness_field(const SimplicialComplex2& k, const std::vector<Index>& removed) {
  Core core(k);
  core.collapse_all();
  for (Index f : removed) core.remove(f);
  Matching m(k);
  for (const auto& entry : core.log()) {
    if (entry.edge >= 0) m.pair({1, entry.edge}, {2, entry.face});
  }
  std::vector<char> seen(k.num_vertices(), 0);
  std::deque<Index> queue;
  for (std::size_t r = 0; r < k.num_vertices(); ++r) {
    if (seen[r]) continue;
    seen[r] = 1;
    queue.assign(1, static_cast<Index>(r));
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index e : k.vertex_cofacets(u)) {
        if (m.is_matched({1, e})) continue;
        const Index w = k.other_endpoint(e, u);
        if (seen[w]) continue;
        seen[w] = 1;
        m.pair({0, w}, {1, e});
        queue.push_back(w);
      }
    }
  }
  if (find_closed_vpath(m)) throw Error(ErrorCode::InvariantViolation, "oracle witness has a closed V-path");
  return m.to_field();
}

}  // namespace

OracleResult min_critical_matching(const SimplicialComplex2& k, std::uint64_t budget) {
  const std::size_t faces = k.num_triangles();
  const auto b0 = static_cast<std::int64_t>(connected_components(k));
  const std::int64_t chi = euler_characteristic(k);

  // Any removal set kills b2 over every field, one dimension per face.
  const BoundaryMatrices bm = boundary_matrices(k);
  std::size_t lower = 0;
  for (const auto& c : {Coefficients::rationals(), Coefficients::prime_field(2)}) {
    lower = std::max<std::size_t>(lower, static_cast<std::size_t>(betti_from_chain(bm, c).b[2]));
  }

  Core core(k);
  core.collapse_all();
  const std::size_t base = core.mark();

  // greedy: remove the smallest surviving face until nothing is left
  std::vector<Index> best;
  for (std::size_t f = 0; f < faces && !core.empty(); ++f) {
    if (core.alive(static_cast<Index>(f))) {
      core.remove(static_cast<Index>(f));
      best.push_back(static_cast<Index>(f));
    }
  }
  core.rollback(base);

  OracleResult out;
  out.exhausted = true;
  Search search{core, faces, budget, 0, false, {}};
  for (std::size_t depth = lower; depth < best.size(); ++depth) {
    search.chosen.clear();
    if (search.run(depth, -1)) {
      best = search.chosen;
      break;
    }
    core.rollback(base);
    if (search.out_of_budget) {
      out.exhausted = false;
      break;
    }
  }
  core.rollback(base);
  out.nodes = search.nodes;

  const auto kk = static_cast<std::int64_t>(best.size());
  out.minimum = 2 * (b0 + kk) - chi;
  out.vector = {b0, out.minimum - b0 - kk, kk};
  out.witness = witness_field(k, best);
  return out;
}

}  // namespace stratmorse
