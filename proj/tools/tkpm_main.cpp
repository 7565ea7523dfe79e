#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tkpm/harness.hpp"
#include "tkpm/instance.hpp"
#include "tkpm/kernels.hpp"
#include "tkpm/nd_solver.hpp"
#include "tkpm/blowup.hpp"

namespace {

constexpr int kInputErrorExit = 2;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tkpm::InputError("cannot write " + path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tkpm::InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k perfect matching and exact matching solvers"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output,-o", output, "Write the result here instead of stdout");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string solve_path;
  tkpm::SolveOptions opts;
  int k_override = -1;
  double epsilon = 0.0, alpha = 0.0;
  solve->add_option("instance", solve_path, "Instance file")->required();
  solve->add_option("--algorithm,-a", opts.algorithm, "Solver")
      ->check(CLI::IsMember({"exact-nd", "approx-nd", "recursive", "em-recursive", "em-random", "oracle"}));
  auto* eps_opt = solve->add_option("--epsilon", epsilon, "Approximation parameter in (0, 1)");
  auto* alpha_opt = solve->add_option("--threshold-alpha", alpha, "Band threshold exponent");
  solve->add_option("--k", k_override, "Override the instance's k");
  solve->add_option("--seed", opts.seed, "Seed for randomized solvers");
  solve->add_option("--trials", opts.trials, "Trials for em-random")->check(CLI::PositiveNumber);
  solve->add_option("--max-oracle-size", opts.max_oracle_size, "Vertex limit for the oracle");
  solve->add_option("--base-blobs", opts.base_blob_limit, "Blob count at or below which recursion stops");
  solve->add_option("--output,-o", output, "Write the report here instead of stdout");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a blow-up instance");
  tkpm::GeneratorSpec gen;
  std::vector<int> size_range;
  std::string problem = "tkpm";
  double gen_eps = 0.0;
  generate->add_option("--shape", gen.shape, "Prototype shape")
      ->check(CLI::IsMember({"path", "cycle", "complete", "star", "random", "empty"}));
  generate->add_option("--blobs", gen.blobs, "Number of blobs");
  generate->add_option("--sizes", gen.sizes, "Blob size, or one size per blob")->delimiter(',');
  generate->add_option("--size-range", size_range, "min,max for random blob sizes")->delimiter(',')->expected(2);
  generate->add_option("--kinds", gen.kinds, "c, i, alternate, random, or one letter per blob");
  generate->add_option("--phi", gen.phi, "Band reach for the random shape");
  generate->add_option("--band-probability", gen.band_probability, "Band density for the random shape");
  generate->add_option("--weights", gen.weights, "uniform:<max> or const:<w>");
  generate->add_option("--problem", problem, "tkpm or em")->check(CLI::IsMember({"tkpm", "em"}));
  generate->add_option("--red-probability", gen.red_probability, "Red edge probability for em");
  generate->add_option("--k", gen.k, "k stored in the instance");
  auto* gen_eps_opt = generate->add_option("--epsilon", gen_eps, "epsilon stored in the instance");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--output,-o", output, "Write the instance here instead of stdout");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid and print CSV");
  std::string config_path, preset;
  int workers = 0;
  auto* config_opt = bench->add_option("--config", config_path, "JSON grid config");
  bench->add_option("--preset", preset, "Built-in grid: tuples, levels, recursive-trend")->excludes(config_opt);
  bench->add_option("--workers", workers, "Concurrent rows (0: all cores)");
  bench->add_option("--output,-o", output, "Write the CSV here instead of stdout");

  // validate
  auto* validate = app.add_subcommand("validate", "Check an instance file, and optionally a report against it");
  std::string validate_path, report_path;
  validate->add_option("instance", validate_path, "Instance file")->required();
  validate->add_option("--report", report_path, "Solve report to re-check");
  validate->add_option("--output,-o", output, "Write the summary here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const tkpm::Instance inst = tkpm::read_instance_file(solve_path);
      if (*eps_opt) opts.epsilon = epsilon;
      if (*alpha_opt) opts.threshold_alpha = alpha;
      if (k_override >= 0) opts.k = k_override;
      const tkpm::SolveReport report = tkpm::cmd_solve(inst, opts);
      emit(report.json.dump(2) + "\n", output);
      return tkpm::exit_code(report.status);
    }
    if (*generate) {
      if (size_range.size() == 2) gen.size_range = std::pair{size_range[0], size_range[1]};
      if (*gen_eps_opt) gen.epsilon = gen_eps;
      gen.problem = problem == "em" ? tkpm::ProblemKind::Em : tkpm::ProblemKind::Tkpm;
      emit(tkpm::write_instance(tkpm::cmd_generate(gen)), output);
      return 0;
    }
    if (*bench) {
      tkpm::BenchConfig config;
      if (!config_path.empty())
        config = tkpm::bench_config_from_json(nlohmann::json::parse(slurp(config_path)));
      else
        config = tkpm::bench_preset(preset.empty() ? "tuples" : preset);
      if (workers > 0) config.workers = workers;
      emit(tkpm::cmd_bench(config), output);
      return 0;
    }
    if (*validate) {
      const tkpm::Instance inst = tkpm::read_instance_file(validate_path);
      nlohmann::json summary = {{"problem", std::string(tkpm::problem_name(inst.kind))},
                                {"vertices", inst.vertex_count},
                                {"edges", inst.edges.size()},
                                {"k", inst.k},
                                {"isa", std::string(tkpm::kernels::isa_name(tkpm::kernels::active_isa()))}};
      const tkpm::Graph g = inst.graph();
      summary["gamma"] = tkpm::compute_type_partition(g).gamma();
      if (inst.prototype) {
        const tkpm::Prototype& p = *inst.prototype;
        tkpm::derive_blowup_map(g, p);
        summary["blobs"] = p.blob_count();
        summary["bands"] = p.bands.size();
        if (p.ordering) summary["bandwidth"] = tkpm::bandwidth_of_ordering(p, *p.ordering);
      }
      if (!report_path.empty()) {
        tkpm::validate_report(inst, nlohmann::json::parse(slurp(report_path)));
        summary["report"] = "valid";
      }
      emit(summary.dump(2) + "\n", output);
      return 0;
    }
  } catch (const tkpm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputErrorExit;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputErrorExit;
  }
  return 0;
}
