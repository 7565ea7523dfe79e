#include <doctest.h>

#include <sstream>

#include "support/generators.hpp"
#include "tkpm/harness.hpp"
#include "tkpm/instance.hpp"
#include "tkpm/oracle.hpp"

using namespace tkpm;

namespace {

const char* kSample =
    "# seed=4\n"
    "# note=hand written\n"
    "\n"
    "p em 4 2 1 0.25\n"
    "blob 1 2 c\n"
    "blob 0 2 i\n"
    "band 0 1\n"
    "order 1 0\n"
    "e 2 3 7 r\n"
    "e 0 2 1 b\n";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) rows.push_back(split_csv_line(line));
  return rows;
}

std::string column(const std::vector<std::vector<std::string>>& rows, std::size_t row, const std::string& name) {
  const auto& header = rows.front();
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return rows[row + 1][static_cast<std::size_t>(it - header.begin())];
}

}  // namespace

TEST_CASE("parse a K2 instance") {
  const Instance inst = parse_instance("p tkpm 2 1 1\ne 0 1 5\n");
  CHECK(inst.kind == ProblemKind::Tkpm);
  CHECK(inst.vertex_count == 2);
  CHECK(inst.k == 1);
  REQUIRE(inst.edges.size() == 1);
  CHECK(inst.edges[0].w == 5);
  CHECK_FALSE(inst.prototype);
  CHECK(inst.graph().edge_count() == 1);
}

TEST_CASE("parse the full format") {
  const Instance inst = parse_instance(kSample);
  CHECK(inst.kind == ProblemKind::Em);
  CHECK(inst.epsilon == 0.25);
  CHECK(inst.metadata.size() == 2);
  CHECK(inst.metadata[1].second == "hand written");
  REQUIRE(inst.prototype);
  CHECK(inst.prototype->blobs[0].kind == ClassKind::Independent);
  CHECK(inst.prototype->blobs[1].kind == ClassKind::Clique);
  CHECK(inst.prototype->ordering == std::vector<BlobId>{1, 0});
  CHECK(inst.edges[0].color == Color::Red);
}

TEST_CASE("write is canonical and round-trips") {
  const std::string once = write_instance(parse_instance(kSample));
  CHECK(write_instance(parse_instance(once)) == once);
  CHECK(once.find("blob 0 2 i\nblob 1 2 c\n") != std::string::npos);
  CHECK(once.rfind("p em 4 2 1 0.25\n", 100) != std::string::npos);
}

TEST_CASE("parse errors carry line numbers") {
  auto message = [](const char* text) {
    try {
      parse_instance(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("p tkpm 2 1 1\nx 0 1\n").find("line 2") == 0);
  CHECK(message("p tkpm 2 2 1\ne 0 1 5\ne 1 0 3\n").find("line 3: duplicate edge") == 0);
  CHECK(message("p tkpm 2 1 1\ne 0 1 five\n").find("line 2") == 0);
  CHECK(message("p tkpm 2 1 1\ne 0 0 5\n").find("line 2") == 0);
  CHECK(message("p tkpm 2 1 1\ne 0 1 5 g\n").find("line 2") == 0);
  CHECK(message("p maybe 2 1 1\ne 0 1 5\n").find("line 1") == 0);
  CHECK(message("e 0 1 5\n") == "missing problem line");
  CHECK(message("p tkpm 2 2 1\ne 0 1 5\n").find("declares 2 edges") != std::string::npos);
  CHECK(message("p tkpm 2 1 1\ne 0 2 5\n").find("missing vertex") != std::string::npos);
  CHECK(message("p tkpm 2 0 0\nblob 1 2 i\n").find("missing 0") != std::string::npos);
  CHECK(message("p tkpm 2 0 0\nblob 0 2 i\nblob 0 2 i\n").find("line 3") == 0);
  CHECK(message("p tkpm 2 0 0\np tkpm 2 0 0\n").find("line 2") == 0);
}

TEST_CASE("generator produces the requested shape") {
  GeneratorSpec spec;
  spec.shape = "path";
  spec.blobs = 4;
  spec.sizes = {2};
  const Instance inst = cmd_generate(spec);
  CHECK(inst.vertex_count == 8);
  REQUIRE(inst.prototype);
  CHECK(inst.prototype->bands.size() == 3);
  CHECK(bandwidth_of_ordering(*inst.prototype, *inst.prototype->ordering) == 1);

  spec.shape = "cycle";
  spec.blobs = 7;
  const Instance cyc = cmd_generate(spec);
  CHECK(bandwidth_of_ordering(*cyc.prototype, *cyc.prototype->ordering) == 2);

  spec.shape = "star";
  CHECK(bandwidth_of_ordering(*cmd_generate(spec).prototype, *cmd_generate(spec).prototype->ordering) == 3);
}

TEST_CASE("generator is deterministic and rejects bad specs") {
  GeneratorSpec spec;
  spec.shape = "random";
  spec.blobs = 9;
  spec.size_range = std::pair{1, 4};
  spec.kinds = "random";
  spec.problem = ProblemKind::Em;
  spec.seed = 77;
  CHECK(write_instance(cmd_generate(spec)) == write_instance(cmd_generate(spec)));
  spec.seed = 78;
  const std::string other = write_instance(cmd_generate(spec));
  spec.seed = 77;
  CHECK(write_instance(cmd_generate(spec)) != other);

  GeneratorSpec bad;
  bad.shape = "hexagon";
  CHECK_THROWS_AS(cmd_generate(bad), InputError);
  bad = GeneratorSpec{};
  bad.sizes = {1, 2};
  CHECK_THROWS_AS(cmd_generate(bad), InputError);
  bad = GeneratorSpec{};
  bad.blobs = 3;
  bad.sizes = {1};
  CHECK_THROWS_AS(cmd_generate(bad), InputError);
  bad = GeneratorSpec{};
  bad.weights = "gaussian:3";
  CHECK_THROWS_AS(cmd_generate(bad), InputError);
  bad = GeneratorSpec{};
  bad.kinds = "cx";
  CHECK_THROWS_AS(cmd_generate(bad), InputError);
}

TEST_CASE("generated files parse back to the same blow-up") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorSpec spec;
    spec.shape = seed % 2 ? "random" : "cycle";
    spec.blobs = static_cast<int>(3 + seed % 6);
    spec.size_range = std::pair{1, 3};
    spec.kinds = "random";
    spec.seed = seed;
    const Instance a = cmd_generate(spec);
    const Instance b = parse_instance(write_instance(a));
    REQUIRE(b.prototype);
    const Graph ga = a.graph();
    const Graph gb = b.graph();
    REQUIRE(ga.edge_count() == gb.edge_count());
    for (int id = 0; id < ga.edge_count(); ++id) {
      const auto e = gb.find_edge(ga.edge(id).u, ga.edge(id).v);
      REQUIRE(e);
      CHECK(gb.edge(*e).w == ga.edge(id).w);
    }
    CHECK_NOTHROW(derive_blowup_map(gb, *b.prototype));
  }
}

TEST_CASE("solve the 4-cycle") {
  const Instance inst = parse_instance("p tkpm 4 4 2\ne 0 1 1\ne 1 2 2\ne 2 3 1\ne 0 3 2\n");
  for (const char* algo : {"exact-nd", "oracle"}) {
    SolveOptions o;
    o.algorithm = algo;
    const auto r = cmd_solve(inst, o);
    CHECK(r.status == SolveStatus::Solved);
    CHECK(exit_code(r.status) == 0);
    CHECK(r.json["objective"] == 4);
    CHECK(r.json["matching"].size() == 2);
    CHECK_NOTHROW(validate_report(inst, r.json));
  }
  SolveOptions o;
  o.algorithm = "approx-nd";
  CHECK_THROWS_AS(cmd_solve(inst, o), InputError);
  o.epsilon = 0.5;
  CHECK(cmd_solve(inst, o).json["objective"] == 4);
  o.algorithm = "recursive";
  CHECK_THROWS_AS(cmd_solve(inst, o), InputError);
  o.algorithm = "em-random";
  CHECK_THROWS_AS(cmd_solve(inst, o), InputError);
  o.algorithm = "simplex";
  CHECK_THROWS_AS(cmd_solve(inst, o), InputError);
}

TEST_CASE("solve rejects odd vertex counts and reports infeasibility") {
  SolveOptions o;
  CHECK_THROWS_AS(cmd_solve(parse_instance("p tkpm 3 1 0\ne 0 1 1\n"), o), InputError);
  const auto r = cmd_solve(parse_instance("p tkpm 4 1 1\ne 0 1 1\n"), o);
  CHECK(r.status == SolveStatus::Infeasible);
  CHECK(exit_code(r.status) == 1);
  CHECK(r.json["status"] == "infeasible");
}

TEST_CASE("exact matching solvers through the harness") {
  const Instance inst = parse_instance("p em 4 2 1\nblob 0 2 c\nblob 1 2 c\ne 0 1 1 r\ne 2 3 1 b\n");
  for (const char* algo : {"em-recursive", "em-random", "oracle"}) {
    SolveOptions o;
    o.algorithm = algo;
    const auto r = cmd_solve(inst, o);
    CHECK(r.json["decision"] == "yes");
    CHECK_NOTHROW(validate_report(inst, r.json));
    o.k = 2;
    CHECK(cmd_solve(inst, o).status == SolveStatus::Infeasible);
  }
  SolveOptions o;
  o.algorithm = "exact-nd";
  CHECK_THROWS_AS(cmd_solve(inst, o), InputError);
  o.algorithm = "oracle";
  CHECK_THROWS_AS(cmd_solve(parse_instance("p em 2 1 0\ne 0 1 1\n"), o), InputError);
}

TEST_CASE("report validation catches tampering") {
  const Instance inst = parse_instance("p tkpm 4 4 1\ne 0 1 1\ne 1 2 2\ne 2 3 1\ne 0 3 2\n");
  SolveOptions o;
  auto r = cmd_solve(inst, o).json;
  auto wrong_objective = r;
  wrong_objective["objective"] = 3;
  CHECK_THROWS_AS(validate_report(inst, wrong_objective), InputError);
  auto wrong_edge = r;
  wrong_edge["matching"][0] = {0, 2, 1};
  CHECK_THROWS_AS(validate_report(inst, wrong_edge), InputError);
  auto partial = r;
  partial["matching"].erase(0);
  CHECK_THROWS_AS(validate_report(inst, partial), InputError);
  auto wrong_kind = r;
  wrong_kind["problem"] = "em";
  CHECK_THROWS_AS(validate_report(inst, wrong_kind), InputError);
}

TEST_CASE("oracle and exact solver agree on a seeded batch, approx within its factor") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GeneratorSpec spec;
    spec.shape = "random";
    spec.blobs = 4;
    spec.size_range = std::pair{1, 3};
    spec.kinds = "random";
    spec.k = 2;
    spec.seed = seed;
    const Instance inst = cmd_generate(spec);
    if (inst.vertex_count < 4) continue;
    SolveOptions o;
    o.algorithm = "oracle";
    const auto truth = cmd_solve(inst, o);
    o.algorithm = "exact-nd";
    const auto exact = cmd_solve(inst, o);
    CHECK(truth.status == exact.status);
    CHECK(truth.json.value("objective", -1) == exact.json.value("objective", -1));
    o.algorithm = "approx-nd";
    o.epsilon = 0.5;
    const auto approx = cmd_solve(inst, o);
    if (truth.status == SolveStatus::Solved)
      CHECK(2 * approx.json["objective"].get<Weight>() >= truth.json["objective"].get<Weight>());
    // Reports are deterministic apart from timing.
    auto a = cmd_solve(inst, o).json;
    auto b = approx.json;
    a.erase("wall_ms");
    b.erase("wall_ms");
    CHECK(a == b);
  }
}

TEST_CASE("bench rows carry closed-form counts") {
  const auto config = bench_config_from_json(nlohmann::json::parse(R"({"workers": 2, "rows": [
    {"generator": {"shape": "path", "sizes": [8], "kinds": "alternate"},
     "algorithm": "exact-nd", "blobs": [2], "k": [1]},
    {"generator": {"shape": "path", "sizes": [20], "kinds": "alternate"},
     "algorithm": "approx-nd", "blobs": 2, "k": 10, "epsilon": 0.5},
    {"generator": {"shape": "path", "sizes": [3]}, "algorithm": "exact-nd", "blobs": [3]}]})"));
  REQUIRE(config.rows.size() == 3);
  const auto rows = csv_rows(cmd_bench(config));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].size() == split_csv_line(std::string(kBenchHeader)).size());
  CHECK(column(rows, 0, "gamma") == "2");
  CHECK(column(rows, 0, "tuples") == "3");
  CHECK(column(rows, 0, "binomial") == "3");
  CHECK(column(rows, 0, "tuples_match") == "yes");
  CHECK(column(rows, 1, "levels") == "6");
  CHECK(column(rows, 1, "tuples_match") == "yes");
  CHECK(column(rows, 2, "status") == "error");
  CHECK(column(rows, 2, "error").find("odd") != std::string::npos);
}

TEST_CASE("bench presets expand") {
  for (const auto& name : bench_preset_names()) CHECK_FALSE(bench_preset(name).rows.empty());
  CHECK(bench_preset("tuples").rows.size() == 16);
  CHECK_THROWS_AS(bench_preset("nope"), InputError);
}
