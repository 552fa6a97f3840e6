#include "stratmorse/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "stratmorse/error.hpp"

namespace stratmorse {

using nlohmann::json;

std::map<std::string, std::int64_t> parse_circle_lengths(const std::string& text) {
  std::map<std::string, std::int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument, "circle length must look like <id>=<L>, got '" + item + "'");
    }
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    std::int64_t n = 0;
    try {
      n = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw Error(ErrorCode::InvalidArgument, "circle length '" + value + "' is not an integer");
    }
    if (!out.emplace(item.substr(0, eq), n).second) {
      throw Error(ErrorCode::InvalidArgument, "circle '" + item.substr(0, eq) + "' given twice");
    }
  }
  return out;
}

namespace {

json big_json(const BigInt& d) {
  if (d <= std::numeric_limits<std::int64_t>::max()) return static_cast<std::int64_t>(d);
  return d.str();
}

json names(const std::vector<Coefficients>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(c.name());
  return out;
}

json vector_json(const MorseVector& m) { return json::array({m.m0, m.m1, m.m2}); }

json mesh_json(const SimplicialComplex2& k) {
  return {{"vertices", k.num_vertices()},
          {"edges", k.num_edges()},
          {"triangles", k.num_triangles()},
          {"cells", k.num_cells()},
          {"euler", euler_characteristic(k)}};
}

}  // namespace

json betti_json(const BettiVector& b) {
  json torsion = json::array();
  for (const auto& d : b.torsion) torsion.push_back(big_json(d));
  return {{"coefficients", b.coefficients.name()}, {"betti", b.b}, {"torsion", torsion}};
}

json analyze_json(const StratifoldSpec& spec, const std::vector<Coefficients>& coefficients) {
  require_valid(spec);
  const StratifoldGraph g = build_graph(spec);
  json white = json::array(), black = json::array(), edges = json::array();
  for (auto genus : g.white_genus) white.push_back(genus);
  for (const auto& c : g.black) black.push_back(c);
  for (const auto& e : g.edges) {
    edges.push_back({{"surface", e.surface}, {"circle", g.black[e.circle]}, {"weight", e.weight}});
  }
  const StratifoldType t = classify(spec);
  json sums = json::array();
  for (const auto& s : t.sums) sums.push_back({{"surface", s.surface}, {"circle", spec.circles[s.circle]}, {"sum", s.sum}});
  json cw = json::array();
  for (const auto& c : coefficients) cw.push_back(betti_json(cw_betti(spec, c)));
  json out;
  out["graph"] = {{"white", white}, {"black", black}, {"edges", edges}};
  out["twisted"] = is_twisted(spec);
  out["type"] = to_string(t.kind);
  out["witness_prime"] = t.witness_prime ? json(*t.witness_prime) : json(nullptr);
  out["gcd"] = t.gcd;
  out["prime_factors"] = t.prime_factors;
  out["pair_sums"] = sums;
  out["euler"] = euler_from_spec(spec);
  out["predicted_m"] = vector_json(predicted_morse_vector(spec));
  out["cw_homology"] = cw;
  return out;
}

json homology_json(const SimplicialComplex2& k, const std::vector<Coefficients>& coefficients) {
  json table = json::array();
  for (const auto& c : coefficients) table.push_back(betti_json(betti(k, c)));
  return {{"mesh", mesh_json(k)}, {"homology", table}};
}

json report_json(const MorseReport& r, const GradientResult& g, const SimplicialComplex2& k) {
  json out;
  out["m"] = vector_json(r.m);
  out["type"] = r.type ? json(to_string(r.type->kind)) : json(nullptr);
  out["witness_prime"] = r.type && r.type->witness_prime ? json(*r.type->witness_prime) : json(nullptr);
  out["perfect"] = names(r.perfect);
  out["optimal"] = to_string(r.optimal);
  out["repair"] = r.repair;
  out["reading"] = to_string(g.reading);
  out["cancellations"] = g.cancellations;
  out["dual_fallback"] = g.dual_fallback;
  out["polygons_per_surface"] = g.polygons_per_surface;
  out["steps"] = g.steps;
  out["predicted"] = r.predicted ? vector_json(*r.predicted) : json(nullptr);
  json critical = json::array();
  for (const auto& c : r.critical) critical.push_back(spell(k, c));
  out["critical"] = critical;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json b = betti_json(c.betti);
    b["inequalities_hold"] = c.holds;
    checks.push_back(b);
  }
  out["checks"] = checks;
  out["oracle_minimum"] = r.oracle_minimum ? json(*r.oracle_minimum) : json(nullptr);
  out["oracle_exhausted"] = r.oracle_exhausted;
  out["violations"] = r.violations;
  return out;
}

json oracle_json(const OracleResult& r) {
  return {{"minimum", r.minimum}, {"vector", vector_json(r.vector)}, {"nodes", r.nodes}, {"exhausted", r.exhausted}};
}

SimplicialComplex2 relabel(const SimplicialComplex2& k, std::uint64_t seed) {
  std::vector<Index> perm(k.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Index>> simplices;
  for (std::size_t v = 0; v < k.num_vertices(); ++v) simplices.push_back({perm[v]});
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    const auto& ed = k.edge(static_cast<Index>(e));
    simplices.push_back({perm[ed[0]], perm[ed[1]]});
  }
  for (std::size_t t = 0; t < k.num_triangles(); ++t) {
    const auto& tr = k.triangle(static_cast<Index>(t));
    simplices.push_back({perm[tr[0]], perm[tr[1]], perm[tr[2]]});
  }
  return build_complex(simplices);
}

OracleRun run_oracle(const SimplicialComplex2& k, const RunOptions& options) {
  OracleRun run{min_critical_matching(k, options.oracle_budget), std::nullopt, {}};
  run.json = oracle_json(run.result);
  if (options.seed) {
    run.relabelled = min_critical_matching(relabel(k, *options.seed), options.oracle_budget);
    run.json["seed"] = *options.seed;
    run.json["relabelled"] = oracle_json(*run.relabelled);
  }
  return run;
}

MorseRun run_morse(const StratifoldMesh& sm, const StratifoldSpec* spec, const RunOptions& options) {
  MorseRun run;
  run.gradient = optimal_gradient(sm, options.reading);
  if (sm.mesh.num_cells() <= options.oracle_max_cells) run.oracle = run_oracle(sm.mesh, options);
  const OracleRun* oracle = run.oracle ? &*run.oracle : nullptr;
  run.report = verify_report(run.gradient, sm, spec, options.coefficients, oracle ? &oracle->result : nullptr);
  if (oracle) {
    const auto n = static_cast<std::int64_t>(sm.structure.num_surfaces);
    if (oracle->result.exhausted && spec && is_twisted(*spec) && oracle->result.vector.m2 < n) {
      run.report.violations.push_back("oracle found fewer critical faces than surfaces");
    }
    if (oracle->relabelled && oracle->relabelled->exhausted && oracle->result.exhausted &&
        oracle->relabelled->minimum != oracle->result.minimum) {
      run.report.violations.push_back("oracle minimum changes under relabelling");
    }
  }
  run.json["mesh"] = mesh_json(sm.mesh);
  run.json["report"] = report_json(run.report, run.gradient, sm.mesh);
  if (oracle) {
    run.json["oracle"] = oracle->json;
  } else {
    run.json["oracle"] = {{"skipped", std::to_string(sm.mesh.num_cells()) + " cells exceed the limit of " +
                                          std::to_string(options.oracle_max_cells)}};
  }
  run.json["ok"] = run.report.violations.empty();
  return run;
}

VerifyRun run_verify(const StratifoldSpec& spec, const RunOptions& options) {
  require_valid(spec);
  VerifyRun run{triangulate_spec(spec, options.triangulation), {}, {}, {}};
  MorseRun morse = run_morse(run.triangulation.mesh, &spec, options);
  run.gradient = std::move(morse.gradient);
  run.report = std::move(morse.report);
  run.json["analysis"] = analyze_json(spec, options.coefficients);
  for (auto& [key, value] : morse.json.items()) run.json[key] = std::move(value);
  return run;
}

BenchRun run_bench(const StratifoldSpec& spec, const RunOptions& options, int max_fineness) {
  using Clock = std::chrono::steady_clock;
  require_valid(spec);
  BenchRun run;
  std::vector<Triangulation> meshes;
  for (int f = 0; f <= max_fineness; ++f) {
    TriangulateOptions topt = options.triangulation;
    topt.fineness = f;
    meshes.push_back(triangulate_spec(spec, topt));
    run.points.push_back({f, meshes.back().mesh.mesh.num_cells(), 0, 0});
  }
  auto timed = [&](std::size_t i, std::size_t calls) {
    const auto start = Clock::now();
    for (std::size_t c = 0; c < calls; ++c) run.points[i].steps = optimal_gradient(meshes[i].mesh, options.reading).steps;
    return std::chrono::duration<double>(Clock::now() - start).count() / static_cast<double>(calls);
  };
  // Batches of at least 5 ms per size, interleaved across sizes so that every
  // size gets the same number of samples under the same machine conditions.
  std::vector<std::size_t> batch(meshes.size());
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const double once = std::max(timed(i, 1), 1e-7);
    batch[i] = static_cast<std::size_t>(std::ceil(0.005 / once));
  }
  constexpr int kRounds = 7;
  for (int round = 0; round < kRounds; ++round) {
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      const double s = timed(i, batch[i]);
      run.points[i].seconds = round == 0 ? s : std::min(run.points[i].seconds, s);
    }
  }
  json points = json::array();
  for (std::size_t i = 0; i < run.points.size(); ++i) {
    const auto& p = run.points[i];
    json j = {{"fineness", p.fineness}, {"cells", p.cells}, {"steps", p.steps}, {"seconds", p.seconds}};
    if (i > 0) {
      const auto& q = run.points[i - 1];
      const double cell_ratio = static_cast<double>(p.cells) / static_cast<double>(q.cells);
      const double step_ratio = static_cast<double>(p.steps) / static_cast<double>(q.steps);
      const double time_ratio = p.seconds / q.seconds;
      j["cell_ratio"] = cell_ratio;
      j["step_ratio"] = step_ratio;
      j["time_ratio"] = time_ratio;
      run.steps_linear = run.steps_linear && step_ratio <= 1.5 * cell_ratio;
      run.time_linear = run.time_linear && time_ratio <= 1.5 * cell_ratio;
    }
    points.push_back(j);
  }
  run.json = {{"points", points}, {"steps_linear", run.steps_linear}, {"time_linear", run.time_linear}};
  return run;
}

}  // namespace stratmorse
