#include "tkpm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include "tkpm/blowup.hpp"
#include "tkpm/matching_engine.hpp"
#include "tkpm/nd_solver.hpp"
#include "tkpm/oracle.hpp"
#include "tkpm/recursive_solver.hpp"

namespace tkpm {
namespace {

using json = nlohmann::json;

bool is_em_algorithm(std::string_view a) { return a == "em-recursive" || a == "em-random"; }
bool is_tkpm_algorithm(std::string_view a) { return a == "exact-nd" || a == "approx-nd" || a == "recursive"; }

json matching_rows(const Graph& g, const Matching& m) {
  json rows = json::array();
  for (EdgeId id : m.edges) {
    const Edge& e = g.edge(id);
    json row = {std::min(e.u, e.v), std::max(e.u, e.v), e.w};
    if (e.color == Color::Red) row.push_back("r");
    if (e.color == Color::Blue) row.push_back("b");
    rows.push_back(std::move(row));
  }
  return rows;
}

json nd_counters(const NdStats& s) {
  return {{"gamma", s.gamma},
          {"tuples_visited", s.tuples_visited},
          {"tc_feasible", s.tc_feasible},
          {"extendible", s.extendible},
          {"levels", s.levels},
          {"band_coordinates", s.band_coordinates}};
}

json recursion_counters(const RecursionStats& s) {
  return {{"tight_sets", s.tight_sets}, {"nodes", s.nodes},         {"base_cases", s.base_cases},
          {"separators", s.separators}, {"edge_sets", s.edge_sets}, {"budgets", s.budgets},
          {"base_tuples", s.base_tuples}, {"threshold", s.threshold}, {"bandwidth", s.bandwidth}};
}

Matching matching_from_rows(const Graph& g, const json& rows) {
  if (!rows.is_array()) throw InputError("report matching must be an array");
  std::vector<EdgeId> ids;
  for (const json& row : rows) {
    if (!row.is_array() || row.size() < 3) throw InputError("report matching rows must be [u, v, w, ...]");
    const VertexId u = row[0].get<VertexId>();
    const VertexId v = row[1].get<VertexId>();
    const Weight w = row[2].get<Weight>();
    const auto id = g.find_edge(u, v);
    if (!id) throw InputError("report edge " + std::to_string(u) + " " + std::to_string(v) + " is not in the graph");
    if (g.edge(*id).w != w) throw InputError("report edge " + std::to_string(u) + " " + std::to_string(v) + " has the wrong weight");
    ids.push_back(*id);
  }
  return make_matching(ids);
}

void check_matching(const Graph& g, ProblemKind kind, int k, const Matching& m, const json& report) {
  if (!is_perfect_matching(g, m)) throw InputError("reported matching is not a perfect matching");
  if (kind == ProblemKind::Tkpm) {
    if (!report.contains("objective")) throw InputError("report has no objective");
    if (topk_value(g, m, k) != report["objective"].get<Weight>())
      throw InputError("reported objective does not match the matching");
  } else if (red_count(g, m) != k) {
    throw InputError("reported matching does not have exactly k red edges");
  }
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return c;
}

// Tuples in levels^coords with sum <= k.
std::uint64_t count_level_tuples(const std::vector<int>& levels, std::size_t coords, int k) {
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(k) + 1, 0);
  ways[0] = 1;
  for (std::size_t c = 0; c < coords; ++c) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int s = 0; s <= k; ++s)
      for (int level : levels)
        if (s + level <= k) next[static_cast<std::size_t>(s + level)] += ways[static_cast<std::size_t>(s)];
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t w : ways) total += w;
  return total;
}

std::vector<BlobId> shape_ordering(const std::string& shape, int n) {
  std::vector<BlobId> order;
  if (shape == "cycle") {
    order.push_back(0);
    for (int lo = 1, hi = n - 1; lo <= hi; ++lo, --hi) {
      order.push_back(lo);
      if (hi != lo) order.push_back(hi);
    }
  } else if (shape == "star") {
    const int half = (n - 1) / 2;
    for (int i = 1; i <= half; ++i) order.push_back(i);
    order.push_back(0);
    for (int i = half + 1; i < n; ++i) order.push_back(i);
  } else {
    for (int i = 0; i < n; ++i) order.push_back(i);
  }
  return order;
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

std::string format_number(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

int exit_code(SolveStatus status) { return status == SolveStatus::Solved ? 0 : 1; }

SolveReport cmd_solve(const Instance& instance, const SolveOptions& options) {
  const std::string& algo = options.algorithm;
  if (std::find(std::begin(kAlgorithms), std::end(kAlgorithms), algo) == std::end(kAlgorithms))
    throw InputError("unknown algorithm '" + algo + "'");
  if (instance.kind == ProblemKind::Tkpm && is_em_algorithm(algo))
    throw InputError("algorithm '" + algo + "' solves exact matching, but the instance is top-k");
  if (instance.kind == ProblemKind::Em && is_tkpm_algorithm(algo))
    throw InputError("algorithm '" + algo + "' solves top-k, but the instance is exact matching");
  if (instance.vertex_count % 2 != 0) throw InputError("instance has an odd number of vertices");

  const Graph g = instance.graph();
  const int k = options.k.value_or(instance.k);
  if (k < 0 || 2 * k > g.vertex_count()) throw InputError("k must satisfy 0 <= k <= n");
  if (instance.kind == ProblemKind::Em && !g.fully_colored())
    throw InputError("exact matching needs every edge colored r or b");

  auto ordering_of = [&]() -> std::pair<const Prototype&, std::vector<BlobId>> {
    if (!instance.prototype) throw InputError("algorithm '" + algo + "' needs a prototype block");
    const Prototype& p = *instance.prototype;
    return {p, p.ordering ? *p.ordering : find_bandwidth_ordering(p)};
  };
  RecursionOptions rec;
  rec.base_blob_limit = options.base_blob_limit;
  rec.threshold_alpha = options.threshold_alpha.value_or(0.0);

  SolveReport report;
  json& r = report.json;
  r["algorithm"] = algo;
  r["problem"] = std::string(problem_name(instance.kind));
  r["k"] = k;
  r["vertices"] = g.vertex_count();
  r["edges"] = g.edge_count();

  const auto start = std::chrono::steady_clock::now();
  std::optional<Matching> m;
  Weight objective = 0;
  json counters = json::object();
  std::optional<oracle::EmDecision> decision;

  if (algo == "exact-nd") {
    NdResult res = tkpm_exact_nd(g, k);
    m = std::move(res.matching);
    objective = res.objective;
    counters = nd_counters(res.stats);
  } else if (algo == "approx-nd") {
    const auto eps = options.epsilon ? options.epsilon : instance.epsilon;
    if (!eps) throw InputError("approx-nd needs an epsilon");
    r["epsilon"] = *eps;
    NdResult res = tkpm_approx_nd(g, k, *eps);
    m = std::move(res.matching);
    objective = res.objective;
    counters = nd_counters(res.stats);
  } else if (algo == "recursive") {
    const auto [p, ordering] = ordering_of();
    RecursiveResult res = tkpm_recursive(g, p, ordering, k, rec);
    m = std::move(res.matching);
    objective = res.objective;
    counters = recursion_counters(res.stats);
  } else if (algo == "em-recursive") {
    const auto [p, ordering] = ordering_of();
    RecursiveResult res = em_recursive(g, p, ordering, k, brute_force_em_base(), rec);
    m = std::move(res.matching);
    counters = recursion_counters(res.stats);
  } else if (algo == "em-random") {
    const auto res = oracle::randomized_em(g, k, options.trials, options.seed);
    decision = res.decision;
    counters = {{"trials_run", res.trials_run}};
    r["seed"] = options.seed;
  } else if (instance.kind == ProblemKind::Tkpm) {
    if (auto res = oracle::brute_force_tkpm(g, k, options.max_oracle_size)) {
      m = std::move(res->matching);
      objective = res->objective;
    }
  } else {
    m = oracle::brute_force_em(g, k, options.max_oracle_size);
  }
  const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const bool solved = decision ? *decision == oracle::EmDecision::Yes : m.has_value();
  report.status = solved ? SolveStatus::Solved : SolveStatus::Infeasible;
  r["status"] = solved ? "solved" : "infeasible";
  if (instance.kind == ProblemKind::Em)
    r["decision"] = solved ? "yes" : (decision ? "probably-no" : "no");
  else if (solved)
    r["objective"] = objective;
  r["matching"] = m ? matching_rows(g, *m) : json::array();
  r["counters"] = std::move(counters);
  r["wall_ms"] = wall_ms;
  if (m) check_matching(g, instance.kind, k, *m, r);
  return report;
}

void validate_report(const Instance& instance, const json& report) {
  if (!report.is_object()) throw InputError("report must be a JSON object");
  if (report.value("problem", "") != problem_name(instance.kind))
    throw InputError("report problem kind does not match the instance");
  const Graph g = instance.graph();
  const int k = report.value("k", instance.k);
  if (report.value("status", "") != "solved") return;
  const json rows = report.value("matching", json::array());
  if (rows.empty() && report.value("algorithm", "") == "em-random") return;
  check_matching(g, instance.kind, k, matching_from_rows(g, rows), report);
}

Instance cmd_generate(const GeneratorSpec& spec) {
  static const std::string shapes[] = {"path", "cycle", "complete", "star", "random", "empty"};
  if (std::find(std::begin(shapes), std::end(shapes), spec.shape) == std::end(shapes))
    throw InputError("unknown shape '" + spec.shape + "'");
  const int n = spec.blobs;
  if (n < 1) throw InputError("need at least one blob");
  if (spec.phi < 1) throw InputError("phi must be positive");
  if (!(spec.band_probability >= 0.0 && spec.band_probability <= 1.0))
    throw InputError("band probability must lie in [0, 1]");
  if (!(spec.red_probability >= 0.0 && spec.red_probability <= 1.0))
    throw InputError("red probability must lie in [0, 1]");

  std::mt19937_64 rng(spec.seed);
  Prototype p;
  p.blobs.resize(static_cast<std::size_t>(n));

  std::vector<int> sizes;
  if (spec.size_range) {
    const auto [lo, hi] = *spec.size_range;
    if (lo < 1 || hi < lo) throw InputError("size range must satisfy 1 <= min <= max");
    std::uniform_int_distribution<int> pick(lo, hi);
    for (int i = 0; i < n; ++i) sizes.push_back(pick(rng));
    int total = 0;
    for (int s : sizes) total += s;
    if (total % 2 != 0) ++sizes.back();
  } else if (spec.sizes.size() == 1) {
    sizes.assign(static_cast<std::size_t>(n), spec.sizes[0]);
  } else if (static_cast<int>(spec.sizes.size()) == n) {
    sizes = spec.sizes;
  } else {
    throw InputError("give one size or one size per blob");
  }

  std::string kinds;
  if (spec.kinds == "c" || spec.kinds == "i") {
    kinds.assign(static_cast<std::size_t>(n), spec.kinds[0]);
  } else if (spec.kinds == "alternate") {
    for (int i = 0; i < n; ++i) kinds += i % 2 == 0 ? 'c' : 'i';
  } else if (spec.kinds == "random") {
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < n; ++i) kinds += coin(rng) ? 'c' : 'i';
  } else if (static_cast<int>(spec.kinds.size()) == n &&
             spec.kinds.find_first_not_of("ci") == std::string::npos) {
    kinds = spec.kinds;
  } else {
    throw InputError("kinds must be c, i, alternate, random, or one c/i per blob");
  }

  int total = 0;
  for (int i = 0; i < n; ++i) {
    if (sizes[static_cast<std::size_t>(i)] < 1) throw InputError("blob sizes must be positive");
    p.blobs[static_cast<std::size_t>(i)] =
        Blob{sizes[static_cast<std::size_t>(i)], kinds[static_cast<std::size_t>(i)] == 'c' ? ClassKind::Clique : ClassKind::Independent};
    total += sizes[static_cast<std::size_t>(i)];
  }
  if (total % 2 != 0) throw InputError("blob sizes sum to an odd number of vertices");
  if (spec.k < 0 || 2 * spec.k > total) throw InputError("k must satisfy 0 <= k <= n");

  if (spec.shape == "path" || spec.shape == "cycle") {
    for (int i = 0; i + 1 < n; ++i) p.bands.push_back(Band{i, i + 1});
    if (spec.shape == "cycle" && n >= 3) p.bands.push_back(Band{0, n - 1});
  } else if (spec.shape == "complete") {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) p.bands.push_back(Band{i, j});
  } else if (spec.shape == "star") {
    for (int i = 1; i < n; ++i) p.bands.push_back(Band{0, i});
  } else if (spec.shape == "random") {
    std::bernoulli_distribution keep(spec.band_probability);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n && j - i <= spec.phi; ++j)
        if (keep(rng)) p.bands.push_back(Band{i, j});
  }
  p.ordering = shape_ordering(spec.shape, n);

  WeightRule weights;
  const auto colon = spec.weights.find(':');
  const std::string rule = spec.weights.substr(0, colon);
  Weight value = 0;
  try {
    if (colon == std::string::npos) throw InputError("");
    value = std::stoll(spec.weights.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("weights must be uniform:<max> or const:<w>");
  }
  if (rule == "uniform" && value >= 1)
    weights = UniformWeight{value, rng()};
  else if (rule == "const" && value >= 0)
    weights = ConstantWeight{value};
  else
    throw InputError("weights must be uniform:<max> or const:<w>");
  ColorRule colors = NoColors{};
  if (spec.problem == ProblemKind::Em) colors = RandomColors{spec.red_probability, rng()};

  const BlownUp b = blow_up(p, weights, colors);
  Instance inst;
  inst.kind = spec.problem;
  inst.vertex_count = b.graph.vertex_count();
  inst.k = spec.k;
  inst.epsilon = spec.epsilon;
  inst.edges.assign(b.graph.edges().begin(), b.graph.edges().end());
  inst.prototype = std::move(p);
  inst.metadata = {{"generator", spec.shape},
                   {"blobs", std::to_string(n)},
                   {"sizes", join(sizes)},
                   {"kinds", kinds},
                   {"weights", spec.weights},
                   {"seed", std::to_string(spec.seed)}};
  if (spec.shape == "random") {
    inst.metadata.emplace_back("phi", std::to_string(spec.phi));
    inst.metadata.emplace_back("band_probability", format_number(spec.band_probability));
  }
  if (spec.problem == ProblemKind::Em)
    inst.metadata.emplace_back("red_probability", format_number(spec.red_probability));
  return inst;
}

BenchConfig bench_config_from_json(const json& config) {
  BenchConfig out;
  out.workers = config.value("workers", 0);
  if (!config.contains("rows") || !config["rows"].is_array()) throw InputError("bench config needs a rows array");
  auto axis = [](const json& row, const char* key) {
    std::vector<json> values;
    if (!row.contains(key)) return std::vector<json>{json()};
    if (row[key].is_array())
      for (const json& v : row[key]) values.push_back(v);
    else
      values.push_back(row[key]);
    return values;
  };
  for (const json& row : config["rows"]) {
    GeneratorSpec base;
    const json gen = row.value("generator", json::object());
    base.shape = gen.value("shape", base.shape);
    base.blobs = gen.value("blobs", base.blobs);
    if (gen.contains("sizes")) base.sizes = gen["sizes"].get<std::vector<int>>();
    if (gen.contains("size_range")) {
      const auto r = gen["size_range"].get<std::vector<int>>();
      if (r.size() != 2) throw InputError("size_range must be [min, max]");
      base.size_range = std::pair{r[0], r[1]};
    }
    base.kinds = gen.value("kinds", base.kinds);
    base.phi = gen.value("phi", base.phi);
    base.band_probability = gen.value("band_probability", base.band_probability);
    base.weights = gen.value("weights", base.weights);
    base.red_probability = gen.value("red_probability", base.red_probability);
    if (gen.value("problem", "tkpm") == "em") base.problem = ProblemKind::Em;

    SolveOptions solve;
    solve.algorithm = row.value("algorithm", solve.algorithm);
    solve.max_oracle_size = row.value("max_oracle_size", solve.max_oracle_size);
    solve.trials = row.value("trials", solve.trials);
    solve.base_blob_limit = row.value("base_blob_limit", solve.base_blob_limit);

    for (const json& blobs : axis(row, "blobs"))
      for (const json& k : axis(row, "k"))
        for (const json& eps : axis(row, "epsilon"))
          for (const json& alpha : axis(row, "threshold_alpha"))
            for (const json& seed : axis(row, "seed")) {
              BenchRow r{base, solve};
              if (!blobs.is_null()) r.generator.blobs = blobs.get<int>();
              if (!k.is_null()) r.generator.k = k.get<int>();
              if (!eps.is_null()) r.solve.epsilon = eps.get<double>();
              if (!alpha.is_null()) r.solve.threshold_alpha = alpha.get<double>();
              if (!seed.is_null()) r.generator.seed = r.solve.seed = seed.get<std::uint64_t>();
              out.rows.push_back(std::move(r));
            }
  }
  return out;
}

std::vector<std::string> bench_preset_names() { return {"tuples", "levels", "recursive-trend"}; }

BenchConfig bench_preset(std::string_view name) {
  if (name == "tuples") {
    // Alternating clique/independent paths have one type per blob; blobs of
    // size 8 keep every per-class cap inactive for k <= 4.
    return bench_config_from_json(json::parse(R"({"rows": [{
      "generator": {"shape": "path", "sizes": [8], "kinds": "alternate"},
      "algorithm": "exact-nd", "blobs": [1, 2, 3, 4], "k": [1, 2, 3, 4], "seed": [1]}]})"));
  }
  if (name == "levels") {
    return bench_config_from_json(json::parse(R"({"rows": [{
      "generator": {"shape": "path", "sizes": [20], "kinds": "alternate"},
      "algorithm": "approx-nd", "blobs": [2], "k": [2, 5, 10], "epsilon": [0.1, 0.3, 0.5], "seed": [1]}]})"));
  }
  if (name == "recursive-trend") {
    return bench_config_from_json(json::parse(R"({"rows": [{
      "generator": {"shape": "path", "sizes": [2], "kinds": "c"},
      "algorithm": "recursive", "base_blob_limit": 2,
      "blobs": [4, 6, 8, 10, 12, 14], "k": [2], "seed": [1, 2]}]})"));
  }
  throw InputError("unknown bench preset '" + std::string(name) + "'");
}

std::string cmd_bench(const BenchConfig& config) {
  const std::size_t count = config.rows.size();
  std::vector<std::string> lines(count);
  auto run_row = [&](std::size_t index) {
    const BenchRow& row = config.rows[index];
    const GeneratorSpec& gen = row.generator;
    std::vector<std::string> f(25);
    f[0] = std::to_string(index);
    f[1] = gen.shape;
    f[2] = std::to_string(gen.blobs);
    f[6] = row.solve.algorithm;
    f[7] = std::to_string(gen.k);
    if (row.solve.epsilon) f[8] = format_number(*row.solve.epsilon);
    f[9] = std::to_string(gen.seed);
    try {
      const Instance inst = cmd_generate(gen);
      const Graph g = inst.graph();
      f[3] = std::to_string(g.vertex_count());
      f[4] = std::to_string(g.edge_count());
      const SolveReport rep = cmd_solve(inst, row.solve);
      const json& r = rep.json;
      const json& c = r["counters"];
      f[10] = r["status"].get<std::string>();
      if (r.contains("objective")) f[11] = std::to_string(r["objective"].get<Weight>());
      if (r.contains("decision")) f[11] = r["decision"].get<std::string>();
      auto counter = [&](const char* key) { return c.contains(key) ? c[key].dump() : std::string(); };
      f[5] = counter("gamma");
      f[12] = counter("tuples_visited");
      const bool nd = row.solve.algorithm == "exact-nd" || row.solve.algorithm == "approx-nd";
      if (nd) {
        const TypePartition part = compute_type_partition(g);
        const int gamma = part.gamma();
        f[5] = std::to_string(gamma);
        const int k = gen.k;
        const bool exact = row.solve.algorithm == "exact-nd" || k == 0;
        if (exact) f[15] = std::to_string(binomial(2 * k + gamma - 1, gamma - 1));
        if (rep.status == SolveStatus::Solved) {
          std::uint64_t expected = 0;
          if (exact) {
            std::vector<int> caps;
            for (int i = 0; i < gamma; ++i) caps.push_back(std::min(2 * k, part.class_size(i)));
            expected = count_bounded_compositions(caps, 2 * k);
          } else {
            expected = count_level_tuples(geometric_levels(k, *row.solve.epsilon), c["band_coordinates"].get<std::size_t>(), k);
          }
          f[13] = std::to_string(expected);
          f[14] = expected == c["tuples_visited"].get<std::uint64_t>() ? "yes" : "no";
        }
      }
      f[16] = counter("levels");
      f[17] = counter("band_coordinates");
      f[18] = counter("nodes");
      f[19] = counter("separators");
      f[20] = counter("edge_sets");
      f[21] = counter("tight_sets");
      f[22] = counter("base_cases");
      f[23] = format_number(r["wall_ms"].get<double>());
    } catch (const std::exception& e) {
      f[10] = "error";
      f[24] = e.what();
    }
    std::string line;
    for (std::size_t i = 0; i < f.size(); ++i) line += (i ? "," : "") + csv_escape(f[i]);
    lines[index] = std::move(line);
  };

  std::size_t workers = config.workers > 0 ? static_cast<std::size_t>(config.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) run_row(i);
    });
  for (auto& t : pool) t.join();

  std::string out(kBenchHeader);
  out += '\n';
  for (const auto& line : lines) out += line + '\n';
  return out;
}

}  // namespace tkpm
