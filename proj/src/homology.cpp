#include "stratmorse/homology.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "stratmorse/error.hpp"
#include "stratmorse/stratifold.hpp"

namespace stratmorse {

// --- coefficients ------------------------------------------------------------

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Coefficients Coefficients::prime_field(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  return Coefficients(Kind::PrimeField, p);
}

Coefficients Coefficients::parse(const std::string& text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (text.size() >= 2 && text[0] == 'F' &&
      std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; }) && text.size() <= 10) {
    return prime_field(static_cast<std::uint32_t>(std::stoul(text.substr(1))));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown coefficient system '" + text + "' (expected Z, Q or F<p>)");
}

std::vector<Coefficients> Coefficients::parse_list(const std::string& text) {
  std::vector<Coefficients> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse(item));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
  return out;
}

std::string Coefficients::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "F" + std::to_string(p_);
  }
  return "?";
}

// --- matrices ----------------------------------------------------------------

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& row_major) {
  IntMatrix m(row_major.size(), row_major.empty() ? 0 : row_major[0].size());
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (row_major[r].size() != m.cols) throw Error(ErrorCode::InvalidArgument, "ragged matrix");
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (row_major[r][c] != 0) m.columns[c].push_back({static_cast<Index>(r), row_major[r][c]});
    }
  }
  return m;
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_dense() const {
  std::vector<std::vector<std::int64_t>> out(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t c = 0; c < cols; ++c) {
    for (const auto& [r, v] : columns[c]) out[r][c] = v;
  }
  return out;
}

std::int64_t IntMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = columns[c];
  auto it = std::lower_bound(col.begin(), col.end(), std::pair<Index, std::int64_t>{static_cast<Index>(r), INT64_MIN});
  return it != col.end() && it->first == static_cast<Index>(r) ? it->second : 0;
}

void IntMatrix::add(std::size_t r, std::size_t c, std::int64_t v) {
  auto& col = columns[c];
  auto it = std::lower_bound(col.begin(), col.end(), std::pair<Index, std::int64_t>{static_cast<Index>(r), INT64_MIN});
  if (it != col.end() && it->first == static_cast<Index>(r)) {
    it->second += v;
    if (it->second == 0) col.erase(it);
  } else if (v != 0) {
    col.insert(it, {static_cast<Index>(r), v});
  }
}

std::string IntMatrix::dump() const {
  std::ostringstream out;
  for (const auto& row : to_dense()) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << row[c];
    out << '\n';
  }
  return out.str();
}

bool product_is_zero(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw Error(ErrorCode::InvalidArgument, "dimension mismatch in product");
  std::vector<__int128> acc(a.rows, 0);
  std::vector<Index> touched;
  for (const auto& col : b.columns) {
    touched.clear();
    for (const auto& [k, bv] : col) {
      for (const auto& [r, av] : a.columns[k]) {
        if (acc[r] == 0) touched.push_back(r);
        acc[r] += static_cast<__int128>(av) * bv;
      }
    }
    bool zero = true;
    for (Index r : touched) {
      if (acc[r] != 0) zero = false;
      acc[r] = 0;
    }
    if (!zero) return false;
  }
  return true;
}

// --- elimination -------------------------------------------------------------

namespace {

struct Overflow {};

// Checked int64 arithmetic; throws Overflow so the caller can retry exactly.
struct Int64Ring {
  using T = std::int64_t;
  static bool is_unit(const T& x) { return x == 1 || x == -1; }
  static T quotient(const T& x, const T& pivot) { return x * pivot; }  // pivot is +-1
  static T sub_mul(const T& a, const T& q, const T& b) {
    T prod, out;
    if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
  }
};

struct BigRing {
  using T = BigInt;
  static bool is_unit(const T& x) { return x == 1 || x == -1; }
  static T quotient(const T& x, const T& pivot) { return x * pivot; }
  static T sub_mul(const T& a, const T& q, const T& b) { return a - q * b; }
};

struct ModRing {
  using T = std::int64_t;
  std::int64_t p;
  bool is_unit(const T& x) const { return x != 0; }
  T inverse(T x) const {
    // Fermat
    T result = 1, base = x % p, e = p - 2;
    while (e > 0) {
      if (e & 1) result = static_cast<T>(static_cast<__int128>(result) * base % p);
      base = static_cast<T>(static_cast<__int128>(base) * base % p);
      e >>= 1;
    }
    return result;
  }
  T quotient(const T& x, const T& pivot) const { return static_cast<T>(static_cast<__int128>(x) * inverse(pivot) % p); }
  T sub_mul(const T& a, const T& q, const T& b) const {
    T r = static_cast<T>((static_cast<__int128>(a) - static_cast<__int128>(q) * b) % p);
    return r < 0 ? r + p : r;
  }
};

template <class T>
using SparseCol = std::vector<std::pair<Index, T>>;

template <class T>
struct Eliminated {
  std::size_t unit_pivots = 0;
  // Columns left over (entries on rows never pivoted), no unit entry among them
  // at the time they were last examined.
  std::vector<SparseCol<T>> rest;
};

// Sparse Gaussian elimination restricted to unit pivots. Columns are chosen by
// fewest nonzeros and, within a column, the unit row with fewest nonzeros.
template <class Ring>
Eliminated<typename Ring::T> eliminate_units(std::vector<SparseCol<typename Ring::T>> cols, std::size_t rows,
                                             const Ring& ring) {
  using T = typename Ring::T;
  Eliminated<T> out;
  const std::size_t n = cols.size();
  std::vector<std::vector<Index>> row_cols(rows);
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& [r, v] : cols[c]) row_cols[r].push_back(static_cast<Index>(c));
  }
  std::vector<char> dead_col(n, 0);
  std::vector<std::uint32_t> version(n, 0);
  using Key = std::tuple<std::size_t, Index, std::uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue;
  for (std::size_t c = 0; c < n; ++c) queue.push({cols[c].size(), static_cast<Index>(c), 0});

  SparseCol<T> scratch;
  while (!queue.empty()) {
    auto [nnz, c, ver] = queue.top();
    queue.pop();
    if (dead_col[c] || ver != version[c]) continue;
    auto& col = cols[c];
    if (col.empty()) {
      dead_col[c] = 1;
      continue;
    }
    Index best = -1;
    std::size_t best_count = 0;
    T pivot{};
    for (const auto& [r, v] : col) {
      if (!ring.is_unit(v)) continue;
      if (best < 0 || row_cols[r].size() < best_count) {
        best = r;
        best_count = row_cols[r].size();
        pivot = v;
      }
    }
    if (best < 0) continue;  // parked until some pivot modifies it
    dead_col[c] = 1;
    ++out.unit_pivots;
    for (Index other : row_cols[best]) {
      if (other == c || dead_col[other]) continue;
      auto& oc = cols[other];
      auto it = std::lower_bound(oc.begin(), oc.end(), best, [](const auto& e, Index r) { return e.first < r; });
      if (it == oc.end() || it->first != best) continue;
      const T q = ring.quotient(it->second, pivot);
      // oc -= q * col, dropping row `best` (it cancels exactly).
      scratch.clear();
      auto a = oc.begin();
      auto b = col.begin();
      while (a != oc.end() || b != col.end()) {
        if (b == col.end() || (a != oc.end() && a->first < b->first)) {
          scratch.push_back(std::move(*a));
          ++a;
        } else if (a == oc.end() || b->first < a->first) {
          if (b->first != best) {
            scratch.push_back({b->first, ring.sub_mul(T(0), q, b->second)});
            row_cols[b->first].push_back(other);
          }
          ++b;
        } else {
          if (a->first != best) {
            T v = ring.sub_mul(a->second, q, b->second);
            if (v != 0) scratch.push_back({a->first, std::move(v)});
          }
          ++a;
          ++b;
        }
      }
      std::swap(oc, scratch);
      queue.push({oc.size(), other, ++version[other]});
    }
    row_cols[best].clear();
    // Entries of the pivot column on other rows are cleared by row operations
    // that no longer touch any live column.
    for (const auto& [r, v] : col) {
      auto& rc = row_cols[r];
      rc.erase(std::remove(rc.begin(), rc.end(), c), rc.end());
    }
    col.clear();
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!dead_col[c] && !cols[c].empty()) out.rest.push_back(std::move(cols[c]));
  }
  return out;
}

// Dense diagonalization of a small integer block, then gcd/lcm normalization
// into an invariant factor chain.
std::vector<BigInt> dense_smith(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<BigInt> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero |entry| in the trailing block
    std::size_t pr = rows, pc = cols;
    for (std::size_t r = t; r < rows; ++r) {
      for (std::size_t c = t; c < cols; ++c) {
        if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) {
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a[r][t] == 0) continue;
        BigInt q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) {
          std::swap(a[t], a[r]);
          clean = false;
        }
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a[t][c] == 0) continue;
        BigInt q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) {
          for (auto& row : a) std::swap(row[t], row[c]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  for (std::size_t i = 0; i < diag.size(); ++i) {
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      BigInt g = boost::multiprecision::gcd(diag[i], diag[j]);
      BigInt l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  }
  return diag;
}

template <class Ring>
std::vector<SparseCol<typename Ring::T>> convert(const IntMatrix& m) {
  std::vector<SparseCol<typename Ring::T>> cols(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (const auto& [r, v] : m.columns[c]) cols[c].push_back({r, typename Ring::T(v)});
  }
  return cols;
}

template <class T>
SmithForm finish_smith(const Eliminated<T>& e) {
  SmithForm s;
  s.divisors.assign(e.unit_pivots, BigInt(1));
  if (!e.rest.empty()) {
    std::vector<Index> live_rows;
    for (const auto& col : e.rest) {
      for (const auto& [r, v] : col) live_rows.push_back(r);
    }
    std::sort(live_rows.begin(), live_rows.end());
    live_rows.erase(std::unique(live_rows.begin(), live_rows.end()), live_rows.end());
    std::vector<std::vector<BigInt>> block(live_rows.size(), std::vector<BigInt>(e.rest.size()));
    for (std::size_t c = 0; c < e.rest.size(); ++c) {
      for (const auto& [r, v] : e.rest[c]) {
        const auto pos = std::lower_bound(live_rows.begin(), live_rows.end(), r) - live_rows.begin();
        block[pos][c] = BigInt(v);
      }
    }
    for (auto& d : dense_smith(std::move(block))) s.divisors.push_back(std::move(d));
  }
  s.rank = s.divisors.size();
  return s;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  try {
    return finish_smith(eliminate_units(convert<Int64Ring>(m), m.rows, Int64Ring{}));
  } catch (const Overflow&) {
    return finish_smith(eliminate_units(convert<BigRing>(m), m.rows, BigRing{}));
  }
}

std::size_t rank_mod_p(const IntMatrix& m, std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  const ModRing ring{static_cast<std::int64_t>(p)};
  std::vector<SparseCol<std::int64_t>> cols(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (const auto& [r, v] : m.columns[c]) {
      std::int64_t x = v % ring.p;
      if (x < 0) x += ring.p;
      if (x != 0) cols[c].push_back({r, x});
    }
  }
  auto e = eliminate_units(std::move(cols), m.rows, ring);
  if (!e.rest.empty()) throw Error(ErrorCode::InvariantViolation, "nonzero entries left after elimination mod p");
  return e.unit_pivots;
}

std::size_t rank_over(const IntMatrix& m, const Coefficients& c) {
  if (c.kind() == Coefficients::Kind::PrimeField) return rank_mod_p(m, c.prime());
  return smith_normal_form(m).rank;
}

// --- homology ----------------------------------------------------------------

BoundaryMatrices boundary_matrices(const SimplicialComplex2& k) {
  BoundaryMatrices m;
  m.d1 = IntMatrix(k.num_vertices(), k.num_edges());
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const auto& ed = k.edge(static_cast<Index>(e));
    m.d1.columns[e] = {{ed[0], -1}, {ed[1], 1}};
  }
  m.d2 = IntMatrix(k.num_edges(), k.num_triangles());
  for (std::size_t t = 0; t < k.num_triangles(); ++t) {
    const auto& te = k.triangle_edges(static_cast<Index>(t));  // 01, 02, 12
    std::vector<std::pair<Index, std::int64_t>> col{{te[0], 1}, {te[1], -1}, {te[2], 1}};
    std::sort(col.begin(), col.end());
    m.d2.columns[t] = std::move(col);
  }
  return m;
}

BettiVector betti_from_chain(const BoundaryMatrices& m, const Coefficients& c) {
  const auto dims = m.chain_dims();
  BettiVector b;
  b.coefficients = c;
  std::size_t r1 = 0, r2 = 0;
  if (c.kind() == Coefficients::Kind::PrimeField) {
    r1 = rank_mod_p(m.d1, c.prime());
    r2 = rank_mod_p(m.d2, c.prime());
  } else {
    r1 = smith_normal_form(m.d1).rank;
    const SmithForm s2 = smith_normal_form(m.d2);
    r2 = s2.rank;
    if (c.kind() == Coefficients::Kind::Integers) {
      for (const auto& d : s2.divisors) {
        if (d > 1) b.torsion.push_back(d);
      }
    }
  }
  b.b[0] = static_cast<std::int64_t>(dims[0] - r1);
  b.b[1] = static_cast<std::int64_t>(dims[1] - r1 - r2);
  b.b[2] = static_cast<std::int64_t>(dims[2] - r2);
  return b;
}

BettiVector betti(const SimplicialComplex2& k, const Coefficients& c) {
  return betti_from_chain(boundary_matrices(k), c);
}

BoundaryMatrices cw_chain_matrices(const StratifoldSpec& spec) {
  // Only circle ids must resolve; invalid specs still have a chain complex.
  for (const auto& s : spec.surfaces) {
    for (const auto& a : s.attachments) spec.circle_index(a.circle);
  }
  BoundaryMatrices m;
  auto& [l0, l1, l2] = m.labels;
  const std::size_t nc = spec.circles.size();
  const std::size_t ns = spec.surfaces.size();
  for (const auto& c : spec.circles) l0.push_back("w[" + c + "]");
  for (std::size_t i = 0; i < ns; ++i) l0.push_back("v[" + std::to_string(i) + "]");
  for (const auto& c : spec.circles) l1.push_back("c[" + c + "]");
  // first C1 index of each surface's schema cells and bridges
  std::vector<std::size_t> schema_start(ns), bridge_start(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& s = spec.surfaces[i];
    const std::string si = std::to_string(i);
    schema_start[i] = l1.size();
    if (s.orientable()) {
      for (std::int64_t h = 1; h <= s.genus; ++h) {
        l1.push_back("a[" + si + "," + std::to_string(h) + "]");
        l1.push_back("b[" + si + "," + std::to_string(h) + "]");
      }
    } else {
      for (std::int64_t h = 1; h <= -s.genus; ++h) l1.push_back("a[" + si + "," + std::to_string(h) + "]");
    }
    bridge_start[i] = l1.size();
    for (std::size_t j = 0; j < s.attachments.size(); ++j) l1.push_back("d[" + si + "," + std::to_string(j) + "]");
    l2.push_back("F[" + si + "]");
  }
  m.d1 = IntMatrix(l0.size(), l1.size());
  m.d2 = IntMatrix(l1.size(), ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& s = spec.surfaces[i];
    for (std::size_t j = 0; j < s.attachments.size(); ++j) {
      const std::size_t circle = spec.circle_index(s.attachments[j].circle);
      const std::size_t d = bridge_start[i] + j;
      m.d1.add(circle, d, 1);
      m.d1.add(nc + i, d, -1);
      m.d2.add(circle, i, s.attachments[j].degree);
    }
    if (!s.orientable()) {
      for (std::int64_t h = 0; h < -s.genus; ++h) m.d2.add(schema_start[i] + static_cast<std::size_t>(h), i, 2);
    }
  }
  return m;
}

BettiVector cw_betti(const StratifoldSpec& spec, const Coefficients& c) {
  return betti_from_chain(cw_chain_matrices(spec), c);
}

}  // namespace stratmorse
