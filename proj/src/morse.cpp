#include "stratmorse/morse.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "stratmorse/error.hpp"

namespace stratmorse {

namespace {

// Facets of a cell of dimension 1 or 2, as indices of the next lower dimension.
int facet_indices(const SimplicialComplex2& k, CellRef c, std::array<Index, 3>& out) {
  if (c.dim == 1) {
    out[0] = k.edge(c.index)[0];
    out[1] = k.edge(c.index)[1];
    return 2;
  }
  if (c.dim == 2) {
    out = k.triangle_edges(c.index);
    return 3;
  }
  return 0;
}

std::string spell_path(const SimplicialComplex2& k, const VPath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    if (i) s += i % 2 ? " < " : " > ";
    s += spell(k, p.cells[i]);
  }
  return s;
}

void require_cell(const SimplicialComplex2& k, CellRef c) {
  if (!k.contains(c)) {
    throw Error(ErrorCode::UnknownCell,
                "cell (dim " + std::to_string(c.dim) + ", index " + std::to_string(c.index) +
                    ") is not in the complex");
  }
}

Matching matching_or_throw(const DiscreteVectorField& v, const SimplicialComplex2& k) {
  std::string why;
  auto m = Matching::from_field(v, k, &why);
  if (!m) throw Error(ErrorCode::NotAMatching, why);
  return std::move(*m);
}

}  // namespace

void DiscreteVectorField::normalize() { std::sort(pairs.begin(), pairs.end()); }

DiscreteMorseFunction DiscreteMorseFunction::dimension_function(const SimplicialComplex2& k) {
  DiscreteMorseFunction f;
  for (int d = 0; d < 3; ++d) f.values[d].assign(k.num_cells(d), Rational(d));
  return f;
}

Matching::Matching(const SimplicialComplex2& k) : k_(&k) {
  up_[0].assign(k.num_vertices(), -1);
  up_[1].assign(k.num_edges(), -1);
  down_[0].assign(k.num_edges(), -1);
  down_[1].assign(k.num_triangles(), -1);
}

std::optional<Matching> Matching::from_field(const DiscreteVectorField& v,
                                             const SimplicialComplex2& k, std::string* why) {
  Matching m(k);
  auto fail = [&](const std::string& msg) -> std::optional<Matching> {
    if (why) *why = msg;
    return std::nullopt;
  };
  for (const auto& [lo, hi] : v.pairs) {
    require_cell(k, lo);
    require_cell(k, hi);
    if (hi.dim != lo.dim + 1) return fail("pair " + spell(k, lo) + ", " + spell(k, hi) + " skips a dimension");
    std::array<Index, 3> f{};
    const int n = facet_indices(k, hi, f);
    if (std::find(f.begin(), f.begin() + n, lo.index) == f.begin() + n) {
      return fail(spell(k, lo) + " is not a facet of " + spell(k, hi));
    }
    if (m.is_matched(lo)) return fail(spell(k, lo) + " appears in more than one pair");
    if (m.is_matched(hi)) return fail(spell(k, hi) + " appears in more than one pair");
    m.pair(lo, hi);
  }
  return m;
}

void Matching::pair(CellRef lower, CellRef upper) {
  up_[lower.dim][lower.index] = upper.index;
  down_[lower.dim][upper.index] = lower.index;
  ++size_;
}

void Matching::unpair(CellRef lower) {
  Index u = up_[lower.dim][lower.index];
  if (u < 0) return;
  up_[lower.dim][lower.index] = -1;
  down_[lower.dim][u] = -1;
  --size_;
}

DiscreteVectorField Matching::to_field() const {
  DiscreteVectorField v;
  v.pairs.reserve(size_);
  for (int d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < up_[d].size(); ++i) {
      if (up_[d][i] >= 0) v.pairs.push_back({CellRef{d, static_cast<Index>(i)}, CellRef{d + 1, up_[d][i]}});
    }
  }
  return v;
}

std::vector<CellRef> Matching::critical() const {
  std::vector<CellRef> out;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < k_->num_cells(d); ++i) {
      CellRef c{d, static_cast<Index>(i)};
      if (!is_matched(c)) out.push_back(c);
    }
  }
  return out;
}

MorseVector Matching::counts() const {
  std::array<std::int64_t, 3> m{};
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < k_->num_cells(d); ++i) {
      if (!is_matched(CellRef{d, static_cast<Index>(i)})) ++m[d];
    }
  }
  return {m[0], m[1], m[2]};
}

bool is_matching(const DiscreteVectorField& v, const SimplicialComplex2& k) {
  return Matching::from_field(v, k).has_value();
}

std::optional<VPath> find_closed_vpath(const Matching& m) {
  const auto& k = m.complex();
  for (int d = 0; d < 2; ++d) {
    const std::size_t n = k.num_cells(d);
    // 0 white, 1 on stack, 2 done
    std::vector<std::uint8_t> color(n, 0);
    struct Frame {
      Index node;
      int next;
    };
    std::vector<Frame> stack;
    for (std::size_t s = 0; s < n; ++s) {
      if (color[s] != 0) continue;
      stack.push_back({static_cast<Index>(s), 0});
      color[s] = 1;
      while (!stack.empty()) {
        Frame& top = stack.back();
        const CellRef tau{d, top.node};
        const Index sigma = m.up(tau);
        std::array<Index, 3> f{};
        const int nf = sigma >= 0 ? facet_indices(k, CellRef{d + 1, sigma}, f) : 0;
        bool descended = false;
        while (top.next < nf) {
          const Index w = f[top.next++];
          if (w == top.node) continue;
          if (color[w] == 1) {
            VPath p;
            auto it = std::find_if(stack.begin(), stack.end(), [&](const Frame& fr) { return fr.node == w; });
            for (; it != stack.end(); ++it) {
              p.cells.push_back(CellRef{d, it->node});
              p.cells.push_back(CellRef{d + 1, m.up(CellRef{d, it->node})});
            }
            p.cells.push_back(CellRef{d, w});
            return p;
          }
          if (color[w] == 0) {
            color[w] = 1;
            stack.push_back({w, 0});
            descended = true;
            break;
          }
        }
        if (!descended) {
          color[stack.back().node] = 2;
          stack.pop_back();
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<VPath> find_closed_vpath(const DiscreteVectorField& v, const SimplicialComplex2& k) {
  return find_closed_vpath(matching_or_throw(v, k));
}

DiscreteMorseFunction induce_dmf_values(const DiscreteVectorField& v, const SimplicialComplex2& k) {
  const Matching m = matching_or_throw(v, k);
  if (auto p = find_closed_vpath(m)) {
    throw Error(ErrorCode::ClosedPathExists, spell_path(k, *p));
  }
  // Digraph on all cells: x -> y means f(x) < f(y) is required (or allowed,
  // for matched pairs). Unmatched facet relations point up, matched ones down.
  const std::array<std::size_t, 3> off{0, k.num_vertices(), k.num_vertices() + k.num_edges()};
  const std::size_t total = k.num_cells();
  std::vector<Index> indeg(total, 0);
  std::vector<std::vector<Index>> out(total);
  for (int d = 1; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      const CellRef rho{d, static_cast<Index>(i)};
      std::array<Index, 3> f{};
      const int nf = facet_indices(k, rho, f);
      for (int j = 0; j < nf; ++j) {
        const std::size_t lo = off[d - 1] + f[j];
        const std::size_t hi = off[d] + i;
        if (m.up(CellRef{d - 1, f[j]}) == rho.index) {
          out[hi].push_back(static_cast<Index>(lo));
          ++indeg[lo];
        } else {
          out[lo].push_back(static_cast<Index>(hi));
          ++indeg[hi];
        }
      }
    }
  }
  std::deque<Index> ready;
  for (std::size_t x = 0; x < total; ++x) {
    if (indeg[x] == 0) ready.push_back(static_cast<Index>(x));
  }
  std::vector<std::int64_t> rank(total, -1);
  std::int64_t next = 0;
  while (!ready.empty()) {
    const Index x = ready.front();
    ready.pop_front();
    rank[x] = next++;
    for (Index y : out[x]) {
      if (--indeg[y] == 0) ready.push_back(y);
    }
  }
  if (next != static_cast<std::int64_t>(total)) {
    throw Error(ErrorCode::InvariantViolation, "modified Hasse diagram has a cycle but no closed V-path was found");
  }
  DiscreteMorseFunction fn;
  for (int d = 0; d < 3; ++d) {
    fn.values[d].resize(k.num_cells(d));
    for (std::size_t i = 0; i < k.num_cells(d); ++i) fn.values[d][i] = Rational(rank[off[d] + i]);
  }
  return fn;
}

bool is_dmf(const DiscreteMorseFunction& f, const SimplicialComplex2& k) {
  for (int d = 0; d < 3; ++d) {
    if (f.values[d].size() != k.num_cells(d)) {
      throw Error(ErrorCode::MissingValue, "expected " + std::to_string(k.num_cells(d)) + " values in dimension " +
                                               std::to_string(d) + ", got " + std::to_string(f.values[d].size()));
    }
  }
  std::array<std::vector<int>, 3> up_bad, down_bad;
  for (int d = 0; d < 3; ++d) {
    up_bad[d].assign(k.num_cells(d), 0);
    down_bad[d].assign(k.num_cells(d), 0);
  }
  for (int d = 1; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      std::array<Index, 3> fs{};
      const int nf = facet_indices(k, CellRef{d, static_cast<Index>(i)}, fs);
      for (int j = 0; j < nf; ++j) {
        if (f.values[d - 1][fs[j]] >= f.values[d][i]) {
          ++up_bad[d - 1][fs[j]];
          ++down_bad[d][i];
        }
      }
    }
  }
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      if (up_bad[d][i] > 1 || down_bad[d][i] > 1) return false;
    }
  }
  return true;
}

DiscreteVectorField gradient_of(const DiscreteMorseFunction& f, const SimplicialComplex2& k) {
  if (!is_dmf(f, k)) throw Error(ErrorCode::NotADmf, "value assignment violates the dmf conditions");
  DiscreteVectorField v;
  for (int d = 1; d < 3; ++d) {
    for (std::size_t i = 0; i < k.num_cells(d); ++i) {
      std::array<Index, 3> fs{};
      const int nf = facet_indices(k, CellRef{d, static_cast<Index>(i)}, fs);
      for (int j = 0; j < nf; ++j) {
        if (f.values[d - 1][fs[j]] >= f.values[d][i]) {
          v.pairs.push_back({CellRef{d - 1, fs[j]}, CellRef{d, static_cast<Index>(i)}});
        }
      }
    }
  }
  v.normalize();
  return v;
}

CriticalCells critical_cells(const DiscreteVectorField& v, const SimplicialComplex2& k) {
  const Matching m = matching_or_throw(v, k);
  return {m.critical(), m.counts()};
}

DiscreteVectorField tree_gradient(const SimplicialComplex2& g, Index root) {
  if (root < 0 || static_cast<std::size_t>(root) >= g.num_vertices()) {
    throw Error(ErrorCode::RootMissing, "root " + std::to_string(root) + " is not a vertex");
  }
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<Index> queue{root};
  seen[root] = 1;
  std::size_t reached = 1;
  DiscreteVectorField v;
  while (!queue.empty()) {
    const Index u = queue.front();
    queue.pop_front();
    for (Index e : g.vertex_cofacets(u)) {
      const Index w = g.other_endpoint(e, u);
      if (seen[w]) continue;
      seen[w] = 1;
      ++reached;
      v.pairs.push_back({CellRef{0, w}, CellRef{1, e}});
      queue.push_back(w);
    }
  }
  if (reached != g.num_vertices()) {
    throw Error(ErrorCode::Disconnected, "reached " + std::to_string(reached) + " of " +
                                             std::to_string(g.num_vertices()) + " vertices");
  }
  v.normalize();
  return v;
}

bool check_morse_inequalities(const MorseVector& m, const BettiVector& b, std::int64_t chi) {
  std::int64_t ms = 0, bs = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (m[i] < b[i]) return false;
    // sum_{j<=i} (-1)^{i-j} m_j >= same for b
    ms = m[i] - ms;
    bs = b[i] - bs;
    if (ms < bs) return false;
  }
  return chi == m.euler();
}

int cancel_in_place(Matching& m, CellRef a, CellRef b) {
  const auto& k = m.complex();
  if (b.dim != a.dim + 1 || m.is_matched(a) || m.is_matched(b)) return -1;
  const int d = a.dim;
  // paths[tau]: number of gradient paths from tau down to a, capped at 2.
  std::unordered_map<Index, int> paths;
  auto successors = [&](Index tau, std::array<Index, 3>& f) -> int {
    if (tau == a.index) return 0;
    const Index sigma = m.up(CellRef{d, tau});
    if (sigma < 0) return 0;
    return facet_indices(k, CellRef{d + 1, sigma}, f);
  };
  auto count_from = [&](Index start) {
    if (paths.count(start)) return;
    struct Frame {
      Index node;
      int next;
      int acc;
    };
    std::unordered_map<Index, bool> on_stack;
    std::vector<Frame> stack{{start, 0, start == a.index ? 1 : 0}};
    on_stack[start] = true;
    while (!stack.empty()) {
      Frame& top = stack.back();
      std::array<Index, 3> f{};
      const int nf = successors(top.node, f);
      bool descended = false;
      while (top.next < nf) {
        const Index w = f[top.next];
        if (w == top.node) {
          ++top.next;
          continue;
        }
        auto it = paths.find(w);
        if (it != paths.end()) {
          top.acc = std::min(2, top.acc + it->second);
          ++top.next;
          continue;
        }
        if (on_stack[w]) throw Error(ErrorCode::ClosedPathExists, "gradient path revisits " + spell(k, CellRef{d, w}));
        on_stack[w] = true;
        stack.push_back({w, 0, w == a.index ? 1 : 0});
        descended = true;
        break;
      }
      if (descended) continue;
      const Frame done = stack.back();
      stack.pop_back();
      on_stack[done.node] = false;
      paths[done.node] = done.acc;
    }
  };
  std::array<Index, 3> bf{};
  const int nb = facet_indices(k, b, bf);
  int total = 0;
  Index first = -1;
  for (int j = 0; j < nb; ++j) {
    count_from(bf[j]);
    const int c = paths[bf[j]];
    if (c > 0 && first < 0) first = bf[j];
    total = std::min(2, total + c);
  }
  if (total != 1) return total;
  // Walk the unique path and reverse it.
  std::vector<Index> taus{first};
  std::vector<Index> sigmas;
  while (taus.back() != a.index) {
    const Index tau = taus.back();
    const Index sigma = m.up(CellRef{d, tau});
    std::array<Index, 3> f{};
    const int nf = facet_indices(k, CellRef{d + 1, sigma}, f);
    Index nxt = -1;
    for (int j = 0; j < nf; ++j) {
      if (f[j] != tau && paths.count(f[j]) && paths[f[j]] == 1) nxt = f[j];
    }
    sigmas.push_back(sigma);
    taus.push_back(nxt);
  }
  for (std::size_t j = 0; j < sigmas.size(); ++j) m.unpair(CellRef{d, taus[j]});
  m.pair(CellRef{d, taus[0]}, b);
  for (std::size_t j = 0; j < sigmas.size(); ++j) m.pair(CellRef{d, taus[j + 1]}, CellRef{d + 1, sigmas[j]});
  return 1;
}

DiscreteVectorField cancel_critical_pair(const DiscreteVectorField& v, CellRef a, CellRef b,
                                         const SimplicialComplex2& k) {
  Matching m = matching_or_throw(v, k);
  require_cell(k, a);
  require_cell(k, b);
  if (b.dim != a.dim + 1) throw Error(ErrorCode::InvalidArgument, "cells must have consecutive dimensions");
  if (m.is_matched(a) || m.is_matched(b)) throw Error(ErrorCode::InvalidArgument, "both cells must be critical");
  const int n = cancel_in_place(m, a, b);
  if (n == 0) throw Error(ErrorCode::NoPath, "no gradient path from " + spell(k, b) + " to " + spell(k, a));
  if (n > 1) throw Error(ErrorCode::MultiplePaths, "several gradient paths from " + spell(k, b) + " to " + spell(k, a));
  return m.to_field();
}

void write_field(std::ostream& out, const DiscreteVectorField& v, const SimplicialComplex2& k) {
  for (const auto& [lo, hi] : v.pairs) out << "pair " << spell(k, lo) << ' ' << spell(k, hi) << '\n';
}

DiscreteVectorField read_field(std::istream& in, const SimplicialComplex2& k) {
  DiscreteVectorField v;
  std::string line;
  std::size_t lineno = 0;
  auto read_cell = [&](std::istringstream& ss) -> CellRef {
    std::string tag;
    if (!(ss >> tag) || tag.size() != 1) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected cell");
    const std::size_t n = tag == "v" ? 1 : tag == "e" ? 2 : tag == "t" ? 3 : 0;
    if (n == 0) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown cell tag '" + tag + "'");
    Cell c;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t x;
      if (!(ss >> x)) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected vertex id");
      c.vertices.push_back(static_cast<Index>(x));
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    auto ref = k.find(c);
    if (!ref) throw Error(ErrorCode::UnknownCell, "line " + std::to_string(lineno) + ": cell not in mesh");
    return *ref;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    if (kw != "pair") throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 'pair'");
    CellRef a = read_cell(ss);
    CellRef b = read_cell(ss);
    std::string extra;
    if (ss >> extra) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": trailing data");
    v.pairs.push_back({a, b});
  }
  v.normalize();
  return v;
}

}  // namespace stratmorse
