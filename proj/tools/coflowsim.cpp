// coflowsim: generate, import, run, certify, flp, sweep.
//
// Exit status: 0 ok, 1 bad input or flags, 2 broken internal invariant.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coflow/bounds.hpp"
#include "coflow/engine.hpp"
#include "coflow/instance_io.hpp"
#include "coflow/model.hpp"
#include "coflow/report.hpp"
#include "coflow/schedulers.hpp"
#include "coflow/workloads.hpp"

namespace {

using namespace coflow;

struct Globals {
  std::uint64_t seed = 1;
  std::string output;  // empty: stdout
  double tolerance = 1e-9;
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + g.output + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + g.output + "'");
}

void add_synthetic_flags(CLI::App* cmd, SyntheticParams& params, std::string& weights) {
  cmd->add_option("--n", params.n, "number of coflows")->capture_default_str();
  cmd->add_option("--m", params.m, "ports per side")->capture_default_str();
  cmd->add_option("--p-max", params.p_max, "max flows per coflow")->capture_default_str();
  cmd->add_option("--max-demand", params.max_demand, "max demand per flow")->capture_default_str();
  cmd->add_option("--last-release", params.last_release, "releases uniform on [0, T]")
      ->capture_default_str();
  cmd->add_option("--weights", weights, "uniform:a,b for random integer weights (default: all 1)");
}

void apply_weights(SyntheticParams& params, const std::string& weights) {
  if (!weights.empty()) params.weights = parse_weight_spec(weights);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError("--values: '" + item + "' is not an integer");
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError("--values must list at least one integer");
  return values;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return names;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Non-clairvoyant coflow scheduling simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--output", g.output, "write to this file instead of stdout");
  app.add_option("--tolerance", g.tolerance, "certificate feasibility tolerance")->capture_default_str();

  // generate
  SyntheticParams gen_params;
  std::string gen_weights;
  auto* generate = app.add_subcommand("generate", "synthetic instance");
  add_synthetic_flags(generate, gen_params, gen_weights);

  // import
  std::string trace_path;
  TraceOptions trace_options;
  std::size_t first = 0;
  auto* import = app.add_subcommand("import", "convert a coflow-benchmark trace");
  import->add_option("--trace", trace_path, "trace file")->required();
  import->add_option("--capacity-mbps", trace_options.capacity_mbps, "port capacity in MB/s")
      ->capture_default_str();
  auto* first_opt = import->add_option("--first", first, "keep only the first N coflows");

  // run
  std::string run_instance;
  std::string algorithm;
  bool unit_weights = false;
  bool with_timeline = false;
  auto* run = app.add_subcommand("run", "simulate one algorithm");
  run->add_option("--instance", run_instance, "instance JSON")->required();
  run->add_option("--algorithm", algorithm, "scheduler name")->required();
  run->add_flag("--unit-weights", unit_weights, "treat every weight as 1");
  run->add_flag("--timeline", with_timeline, "include flows and rate timeline");

  // certify
  std::string cert_instance;
  auto* certify = app.add_subcommand("certify", "augmented run and dual lower bound");
  certify->add_option("--instance", cert_instance, "instance JSON")->required();

  // flp
  std::string flp_instance;
  double slot = 1.0;
  int horizon = 0;
  auto* flp = app.add_subcommand("flp", "time-slotted LP lower bound");
  flp->add_option("--instance", flp_instance, "instance JSON")->required();
  flp->add_option("--slot", slot, "slot length")->capture_default_str();
  flp->add_option("--horizon", horizon, "number of slots (default: always sufficient)");

  // sweep
  SweepConfig sweep_config;
  sweep_config.threads = std::max(1u, std::thread::hardware_concurrency());
  std::string axis;
  std::string values;
  std::string algorithms;
  std::string sweep_weights;
  bool sweep_as_json = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "averaged comparison over an axis of synthetic instances");
  sweep_cmd->add_option("--axis", axis, "p or n")->required();
  sweep_cmd->add_option("--values", values, "comma-separated axis values")->required();
  sweep_cmd->add_option("--repetitions", sweep_config.repetitions, "instances per axis value")
      ->capture_default_str();
  sweep_cmd->add_option("--algorithms", algorithms, "comma-separated (default blindflow,blindflow-max,aalo-like)");
  sweep_cmd->add_option("--threads", sweep_config.threads, "worker threads");
  sweep_cmd->add_flag("--json", sweep_as_json, "JSON rows instead of CSV");
  add_synthetic_flags(sweep_cmd, sweep_config.base, sweep_weights);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!(g.tolerance >= 0.0) || !std::isfinite(g.tolerance)) {
    throw ValidationError("--tolerance must be a finite non-negative number");
  }

  if (generate->parsed()) {
    apply_weights(gen_params, gen_weights);
    gen_params.seed = g.seed;
    gen_params.validate();
    emit(g, dump_instance(generate_synthetic(gen_params)) + "\n");
    return 0;
  }
  if (import->parsed()) {
    if (!(trace_options.capacity_mbps > 0.0)) throw ValidationError("--capacity-mbps must be positive");
    if (*first_opt) {
      if (first == 0) throw ValidationError("--first must be at least 1");
      trace_options.first = first;
    }
    emit(g, dump_instance(import_trace(trace_path, trace_options)) + "\n");
    return 0;
  }
  if (run->parsed()) {
    Instance instance = read_instance(run_instance);
    if (unit_weights) instance = with_unit_weights(instance);
    const auto result = run_algorithm(instance, algorithm,
                                      with_timeline ? TimelineDetail::kFull : TimelineDetail::kNone);
    emit(g, result_to_json(result, with_timeline).dump(2) + "\n");
    return 0;
  }
  if (certify->parsed()) {
    const Instance instance = read_instance(cert_instance);
    const DualCertificate cert = certify_instance(instance, g.tolerance);
    emit(g, certificate_report_json(cert).dump(2) + "\n");
    if (!cert.feasibility || !cert.feasibility->feasible) {
      std::cerr << "error: dual certificate is infeasible\n";
      return 2;
    }
    return 0;
  }
  if (flp->parsed()) {
    const Instance instance = read_instance(flp_instance);
    if (!(slot > 0.0) || !std::isfinite(slot)) throw ValidationError("--slot must be positive");
    const int h = horizon > 0 ? horizon : sufficient_flp_horizon(instance, slot);
    const FlpSolution solution = solve_flp(instance, slot, h);
    const nlohmann::json out = {{"optimum", solution.optimum},
                                {"slot", solution.problem.slot_length},
                                {"horizon", solution.problem.horizon},
                                {"variables", solution.problem.num_variables},
                                {"constraints", solution.problem.num_constraints},
                                {"pivots", solution.pivots}};
    emit(g, out.dump(2) + "\n");
    return 0;
  }
  if (sweep_cmd->parsed()) {
    sweep_config.axis = sweep_axis_from_string(axis);
    sweep_config.values = parse_int_list(values);
    if (!algorithms.empty()) sweep_config.algorithms = split_names(algorithms);
    apply_weights(sweep_config.base, sweep_weights);
    sweep_config.seed = g.seed;
    if (sweep_config.threads == 0) throw ValidationError("--threads must be at least 1");
    const auto rows = sweep(sweep_config);
    emit(g, sweep_as_json ? sweep_json(rows).dump(2) + "\n" : sweep_csv(rows));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const coflow::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const coflow::InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
