#include "coflow/report.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "coflow/bounds.hpp"
#include "coflow/random.hpp"
#include "coflow/schedulers.hpp"

namespace coflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_causal(const std::string& algorithm) {
  return algorithm != "baseline" && algorithm != "augmented";
}

bool has_nonzero_release(const Instance& instance) {
  for (const auto& c : instance.coflows) {
    if (c.release_time != 0.0) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {"dual", "smith"};
  return names;
}

std::vector<ComparisonRow> run_comparison(const Instance& instance,
                                          const std::vector<std::string>& algorithms,
                                          const std::vector<std::string>& bounds,
                                          const std::string& instance_id) {
  bool want_dual = false;
  bool want_smith = false;
  for (const auto& b : bounds) {
    if (b == "dual") {
      want_dual = true;
    } else if (b == "smith") {
      want_smith = true;
    } else {
      throw ValidationError("unknown bound '" + b + "' (expected dual or smith)");
    }
  }
  for (const auto& a : algorithms) make_scheduler(a, instance);  // rejects unknown names early

  std::vector<ComparisonRow> rows;
  if (instance.coflows.empty()) return rows;

  const int p = compute_p(instance);
  double dual = kNaN;
  if (want_dual) dual = dual_objective_lower_bound(certify_instance(instance));
  std::optional<double> smith;
  if (want_smith && !has_nonzero_release(instance)) smith = smith_port_lower_bound(instance);

  for (const auto& algorithm : algorithms) {
    const auto start = std::chrono::steady_clock::now();
    const SimulationResult result = run_algorithm(instance, algorithm, TimelineDetail::kNone);
    const auto stop = std::chrono::steady_clock::now();

    ComparisonRow row;
    row.instance_id = instance_id;
    row.p = p;
    row.n = static_cast<int>(instance.coflows.size());
    row.algorithm = algorithm;
    row.j = result.weighted_total;
    row.lower_bound_dual = dual;
    row.lower_bound_smith = smith;
    row.ratio_vs_dual = dual > 0.0 ? row.j / dual : kNaN;
    row.runtime_seconds = std::chrono::duration<double>(stop - start).count();

    if (is_causal(algorithm) && want_dual && row.j < dual - 1e-9 * std::max(1.0, dual)) {
      std::ostringstream msg;
      msg << algorithm << " achieved J=" << row.j << " below the certified lower bound " << dual;
      throw InvariantViolation(msg.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"instance_id", r.instance_id},
                   {"p", r.p},
                   {"n", r.n},
                   {"algorithm", r.algorithm},
                   {"J", r.j},
                   {"lower_bound_dual", num(r.lower_bound_dual)},
                   {"lower_bound_smith", r.lower_bound_smith ? json(*r.lower_bound_smith) : json(nullptr)},
                   {"ratio_vs_dual", num(r.ratio_vs_dual)},
                   {"runtime_seconds", r.runtime_seconds}});
  }
  return out;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "p") return SweepAxis::kP;
  if (name == "n") return SweepAxis::kN;
  throw ValidationError("sweep axis must be p or n, got '" + name + "'");
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::kP ? "p" : "n"; }

std::uint64_t sweep_cell_seed(std::uint64_t seed, int axis_value, int repetition) {
  return derive_seed(derive_seed(seed, static_cast<std::uint64_t>(axis_value)),
                     static_cast<std::uint64_t>(repetition));
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  if (config.values.empty()) throw ValidationError("sweep needs at least one axis value");
  if (config.repetitions < 1) throw ValidationError("sweep needs at least one repetition");
  if (config.algorithms.empty()) throw ValidationError("sweep needs at least one algorithm");

  // Validate every cell's parameters before any work starts.
  std::vector<SyntheticParams> cell_params;
  for (int value : config.values) {
    for (int rep = 0; rep < config.repetitions; ++rep) {
      SyntheticParams params = config.base;
      (config.axis == SweepAxis::kP ? params.p_max : params.n) = value;
      params.seed = sweep_cell_seed(config.seed, value, rep);
      params.validate();
      cell_params.push_back(params);
    }
  }
  for (const auto& a : config.algorithms) {
    if (a == "cos") throw ValidationError("the cos scheduler cannot run on synthetic general instances");
    make_scheduler(a, Instance{});
  }

  std::vector<std::vector<ComparisonRow>> cells(cell_params.size());
  auto run_cell = [&](std::size_t c) {
    const Instance instance = generate_synthetic(cell_params[c]);
    cells[c] = run_comparison(instance, config.algorithms, {"dual"});
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) {
          try {
            run_cell(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<SweepRow> rows;
  const auto reps = static_cast<std::size_t>(config.repetitions);
  for (std::size_t v = 0; v < config.values.size(); ++v) {
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      double sum_j = 0.0;
      double sum_ratio = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& row = cells[v * reps + rep][a];
        sum_j += row.j;
        sum_ratio += row.ratio_vs_dual;
      }
      rows.push_back({config.values[v], config.algorithms[a], sum_j / static_cast<double>(reps),
                      sum_ratio / static_cast<double>(reps)});
    }
  }
  return rows;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.axis_value) + "," + r.algorithm + "," + format_double(r.mean_j) + "," +
           format_double(r.mean_ratio_vs_dual) + "\n";
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw ValidationError("sweep CSV must start with the header '" + std::string(kSweepCsvHeader) + "'");
  }
  auto parse_double = [](const std::string& field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ValidationError("sweep CSV: malformed number '" + field + "'");
    }
    return v;
  };
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string field;
    while (std::getline(cells, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw ValidationError("sweep CSV: expected 4 fields in '" + line + "'");
    SweepRow row;
    row.axis_value = std::stoi(fields[0]);
    row.algorithm = fields[1];
    row.mean_j = parse_double(fields[2]);
    row.mean_ratio_vs_dual = parse_double(fields[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"axis_value", r.axis_value},
                   {"algorithm", r.algorithm},
                   {"mean_J", r.mean_j},
                   {"mean_ratio_vs_dual", r.mean_ratio_vs_dual}});
  }
  return out;
}

}  // namespace coflow
