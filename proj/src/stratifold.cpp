#include "stratmorse/stratifold.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stratmorse/error.hpp"

namespace stratmorse {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::ParseError, where + ": unknown field '" + key + "'");
    }
  }
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  return *it;
}

std::int64_t require_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, where + " must be an integer");
  return v.get<std::int64_t>();
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::size_t StratifoldSpec::circle_index(std::string_view id) const {
  auto it = std::find(circles.begin(), circles.end(), id);
  if (it == circles.end()) throw Error(ErrorCode::InvalidSpec, "unknown circle '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - circles.begin());
}

StratifoldSpec parse_spec_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "spec must be a JSON object");
  reject_unknown(doc, {"circles", "surfaces"}, "spec");
  StratifoldSpec spec;
  const json& circles = require_field(doc, "circles", "spec");
  if (!circles.is_array()) throw Error(ErrorCode::ParseError, "spec.circles must be an array");
  for (const auto& c : circles) {
    if (!c.is_string()) throw Error(ErrorCode::ParseError, "circle ids must be strings");
    spec.circles.push_back(c.get<std::string>());
  }
  const json& surfaces = require_field(doc, "surfaces", "spec");
  if (!surfaces.is_array()) throw Error(ErrorCode::ParseError, "spec.surfaces must be an array");
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const std::string where = "surfaces[" + std::to_string(i) + "]";
    const json& s = surfaces[i];
    if (!s.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
    reject_unknown(s, {"genus", "attachments"}, where);
    SurfaceSpec surface;
    surface.genus = require_int(require_field(s, "genus", where), where + ".genus");
    const json& atts = require_field(s, "attachments", where);
    if (!atts.is_array()) throw Error(ErrorCode::ParseError, where + ".attachments must be an array");
    for (std::size_t j = 0; j < atts.size(); ++j) {
      const std::string aw = where + ".attachments[" + std::to_string(j) + "]";
      const json& a = atts[j];
      if (!a.is_object()) throw Error(ErrorCode::ParseError, aw + " must be an object");
      reject_unknown(a, {"circle", "degree"}, aw);
      const json& cid = require_field(a, "circle", aw);
      if (!cid.is_string()) throw Error(ErrorCode::ParseError, aw + ".circle must be a string");
      surface.attachments.push_back({cid.get<std::string>(), require_int(require_field(a, "degree", aw), aw + ".degree")});
    }
    spec.surfaces.push_back(std::move(surface));
  }
  return spec;
}

StratifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_json(ss.str());
}

std::string spec_to_json(const StratifoldSpec& spec) {
  json doc;
  doc["circles"] = spec.circles;
  doc["surfaces"] = json::array();
  for (const auto& s : spec.surfaces) {
    json atts = json::array();
    for (const auto& a : s.attachments) atts.push_back({{"circle", a.circle}, {"degree", a.degree}});
    doc["surfaces"].push_back({{"genus", s.genus}, {"attachments", atts}});
  }
  return doc.dump();
}

std::vector<std::string> validate_spec(const StratifoldSpec& spec) {
  std::vector<std::string> errors;
  if (spec.circles.empty()) errors.push_back("at least one circle is required");
  if (spec.surfaces.empty()) errors.push_back("at least one surface is required");
  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < spec.circles.size(); ++j) {
    if (!index.emplace(spec.circles[j], j).second) errors.push_back("duplicate circle id '" + spec.circles[j] + "'");
  }
  std::vector<std::int64_t> load(spec.circles.size(), 0);
  // union-find over surfaces (0..n-1) and circles (n..n+m-1)
  const std::size_t n = spec.surfaces.size();
  std::vector<std::size_t> parent(n + spec.circles.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = spec.surfaces[i];
    const std::string who = "surface " + std::to_string(i);
    if (s.attachments.empty()) errors.push_back(who + " has no attachments (closed surfaces are not supported)");
    for (const auto& a : s.attachments) {
      auto it = index.find(a.circle);
      if (it == index.end()) {
        errors.push_back(who + " attaches to unknown circle '" + a.circle + "'");
        continue;
      }
      if (a.degree == 0) errors.push_back(who + " has a zero degree on circle '" + a.circle + "'");
      if (!s.orientable() && a.degree < 0) {
        errors.push_back(who + " is nonorientable but has negative degree " + std::to_string(a.degree) + " on circle '" +
                         a.circle + "'");
      }
      load[it->second] += a.degree < 0 ? -a.degree : a.degree;
      parent[find(i)] = find(n + it->second);
    }
  }
  for (std::size_t j = 0; j < spec.circles.size(); ++j) {
    if (load[j] <= 2) {
      errors.push_back("circle '" + spec.circles[j] + "': sum of |degree| over its attachments is " +
                       std::to_string(load[j]) + ", must be > 2");
    }
  }
  if (!parent.empty()) {
    std::set<std::size_t> roots;
    for (std::size_t x = 0; x < parent.size(); ++x) roots.insert(find(x));
    if (roots.size() > 1) errors.push_back("the surface/circle incidence is not connected");
  }
  return errors;
}

void require_valid(const StratifoldSpec& spec) {
  auto errors = validate_spec(spec);
  if (errors.empty()) return;
  std::string msg;
  for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
  throw Error(ErrorCode::InvalidSpec, msg);
}

StratifoldGraph build_graph(const StratifoldSpec& spec) {
  require_valid(spec);
  StratifoldGraph g;
  g.black = spec.circles;
  for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
    g.white_genus.push_back(spec.surfaces[i].genus);
    for (const auto& a : spec.surfaces[i].attachments) g.edges.push_back({i, spec.circle_index(a.circle), a.degree});
  }
  return g;
}

bool is_twisted(const StratifoldSpec& spec) {
  for (const auto& s : spec.surfaces) {
    for (const auto& a : s.attachments) {
      if (a.degree > -2 && a.degree < 2) return false;
    }
  }
  return true;
}

std::string_view to_string(StratifoldKind kind) {
  switch (kind) {
    case StratifoldKind::Type1: return "Type1";
    case StratifoldKind::Type2: return "Type2";
    case StratifoldKind::Type3: return "Type3";
    case StratifoldKind::Type4: return "Type4";
    case StratifoldKind::NotTwisted: return "NotTwisted";
  }
  return "NotTwisted";
}

std::vector<PairSum> pair_sums(const StratifoldSpec& spec) {
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> sums;
  for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
    for (const auto& a : spec.surfaces[i].attachments) sums[{i, spec.circle_index(a.circle)}] += a.degree;
  }
  std::vector<PairSum> out;
  for (const auto& [key, s] : sums) out.push_back({key.first, key.second, s});
  return out;
}

StratifoldType classify(const StratifoldSpec& spec) {
  require_valid(spec);
  StratifoldType t;
  t.sums = pair_sums(spec);
  for (const auto& ps : t.sums) t.gcd = std::gcd(t.gcd, static_cast<std::uint64_t>(ps.sum < 0 ? -ps.sum : ps.sum));
  t.prime_factors = prime_factors(t.gcd);
  if (!is_twisted(spec)) return t;
  const bool all_orientable =
      std::all_of(spec.surfaces.begin(), spec.surfaces.end(), [](const SurfaceSpec& s) { return s.orientable(); });
  if (all_orientable) {
    if (t.gcd != 1) {
      t.kind = StratifoldKind::Type1;
      t.witness_prime = t.gcd == 0 ? 2u : static_cast<std::uint32_t>(t.prime_factors.front());
    } else {
      t.kind = StratifoldKind::Type2;
    }
  } else {
    const bool all_even = std::all_of(t.sums.begin(), t.sums.end(), [](const PairSum& p) { return p.sum % 2 == 0; });
    if (all_even) {
      t.kind = StratifoldKind::Type3;
      t.witness_prime = 2u;
    } else {
      t.kind = StratifoldKind::Type4;
    }
  }
  return t;
}

std::int64_t surface_euler(const SurfaceSpec& s) {
  const auto k = static_cast<std::int64_t>(s.attachments.size());
  return s.orientable() ? 2 - 2 * s.genus - k : 2 + s.genus - k;
}

std::int64_t euler_from_spec(const StratifoldSpec& spec) {
  require_valid(spec);
  std::int64_t chi = 0;
  for (const auto& s : spec.surfaces) chi += surface_euler(s);
  return chi;
}

MorseVector predicted_morse_vector(const StratifoldSpec& spec) {
  const std::int64_t chi = euler_from_spec(spec);
  const auto n = static_cast<std::int64_t>(spec.surfaces.size());
  const std::int64_t m1 = 1 + n - chi;
  if (m1 < 0) throw Error(ErrorCode::NegativePrediction, "1 + n - chi = " + std::to_string(m1));
  return {1, m1, n};
}

}  // namespace stratmorse
