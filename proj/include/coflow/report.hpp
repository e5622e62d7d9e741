#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coflow/model.hpp"
#include "coflow/workloads.hpp"

namespace coflow {

struct ComparisonRow {
  std::string instance_id;
  int p = 0;
  int n = 0;
  std::string algorithm;
  double j = 0.0;                        // weighted completion time
  double lower_bound_dual = 0.0;         // NaN when not requested
  std::optional<double> lower_bound_smith;
  double ratio_vs_dual = 0.0;            // NaN when the bound is not positive
  double runtime_seconds = 0.0;
};

/// Bound names accepted by run_comparison.
const std::vector<std::string>& bound_names();

/// One independent run per algorithm; the dual bound is certified once.
/// `smith` is skipped (left empty) on instances with nonzero releases.
/// Throws InvariantViolation if a causal algorithm beats the certified bound.
std::vector<ComparisonRow> run_comparison(const Instance& instance,
                                          const std::vector<std::string>& algorithms,
                                          const std::vector<std::string>& bounds = {"dual"},
                                          const std::string& instance_id = "");

nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows);

enum class SweepAxis { kP, kN };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepConfig {
  SweepAxis axis = SweepAxis::kP;
  std::vector<int> values;
  SyntheticParams base;  // base.seed is ignored; cells derive theirs from `seed`
  int repetitions = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms = {"blindflow", "blindflow-max", "aalo-like"};
  unsigned threads = 1;
};

struct SweepRow {
  int axis_value = 0;
  std::string algorithm;
  double mean_j = 0.0;
  double mean_ratio_vs_dual = 0.0;
};

/// Seed of one (axis value, repetition) cell.
std::uint64_t sweep_cell_seed(std::uint64_t seed, int axis_value, int repetition);

/// Rows sorted by (axis value in the given order, algorithm in the given order).
std::vector<SweepRow> sweep(const SweepConfig& config);

inline constexpr const char* kSweepCsvHeader = "axis_value,algorithm,mean_J,mean_ratio_vs_dual";

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

}  // namespace coflow
