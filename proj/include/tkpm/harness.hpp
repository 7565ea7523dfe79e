#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tkpm/instance.hpp"

namespace tkpm {

inline constexpr std::string_view kAlgorithms[] = {"exact-nd",     "approx-nd", "recursive",
                                                   "em-recursive", "em-random", "oracle"};

struct SolveOptions {
  std::string algorithm = "exact-nd";
  std::optional<int> k;  // overrides the instance's k
  std::optional<double> epsilon;
  std::optional<double> threshold_alpha;
  std::uint64_t seed = 1;
  int max_oracle_size = 20;
  int trials = 20;
  int base_blob_limit = 16;
};

enum class SolveStatus { Solved, Infeasible };

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  // algorithm, problem, k, status, objective or decision, matching as
  // [u, v, w(, "r"|"b")] rows, counters, wall_ms.
  nlohmann::json json;
};

// Runs one solver on one instance and re-validates the returned matching.
// Throws InputError for incompatible algorithm/instance combinations.
SolveReport cmd_solve(const Instance& instance, const SolveOptions& options);

int exit_code(SolveStatus status);

// Checks a report's matching against the instance: a perfect matching of
// existing edges whose objective (top-k weight, or red count for exact
// matching) equals the reported one. Throws InputError on any mismatch.
void validate_report(const Instance& instance, const nlohmann::json& report);

struct GeneratorSpec {
  std::string shape = "path";  // path | cycle | complete | star | random | empty
  int blobs = 4;
  // One entry applies to every blob; otherwise one entry per blob.
  std::vector<int> sizes{2};
  // Draw each size uniformly from [min, max] instead; an odd total is fixed
  // by growing the last blob.
  std::optional<std::pair<int, int>> size_range;
  // c | i | alternate | random, or one c/i letter per blob.
  std::string kinds = "i";
  int phi = 2;                    // random shape: bands join blobs at most phi apart
  double band_probability = 0.5;  // random shape
  std::string weights = "uniform:100";  // uniform:<max> | const:<w>
  double red_probability = 0.5;         // exact-matching instances only
  ProblemKind problem = ProblemKind::Tkpm;
  int k = 1;
  std::optional<double> epsilon;
  std::uint64_t seed = 1;
};

// Deterministic under (spec, seed). The instance carries its prototype and a
// bandwidth ordering.
Instance cmd_generate(const GeneratorSpec& spec);

struct BenchRow {
  GeneratorSpec generator;
  SolveOptions solve;
};

struct BenchConfig {
  std::vector<BenchRow> rows;
  int workers = 0;  // 0: hardware concurrency
};

// {"workers": n, "rows": [{"generator": {...}, "algorithm": "...",
//   "k": [..], "epsilon": [..], "seed": [..], "blobs": [..], ...}]}
// Array-valued k, epsilon, seed, blobs and threshold_alpha expand to a grid.
BenchConfig bench_config_from_json(const nlohmann::json& config);

// Built-in grids: "tuples", "levels", "recursive-trend".
BenchConfig bench_preset(std::string_view name);
std::vector<std::string> bench_preset_names();

// One CSV row per configuration, in config order. Rows run concurrently; a
// failing row records its error and the run continues.
std::string cmd_bench(const BenchConfig& config);

inline constexpr std::string_view kBenchHeader =
    "row,shape,blobs,vertices,edges,gamma,algorithm,k,epsilon,seed,status,objective,"
    "tuples,expected_tuples,tuples_match,binomial,levels,band_coordinates,nodes,separators,"
    "edge_sets,tight_sets,base_cases,wall_ms,error";

}  // namespace tkpm
