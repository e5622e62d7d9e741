#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace coflow {

/// Raised for malformed user input: bad instances, bad files, guard violations.
/// The CLI maps it to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a property that must hold by construction does not (an
/// infeasible causal allocation, a failed certificate, a stuck solver).
/// The CLI maps it to exit status 2.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = Eigen::VectorXd;

struct SwitchConfig {
  Vector input_capacities;   // c^IP_i, volume per unit time
  Vector output_capacities;  // c^OP_j

  Eigen::Index num_input_ports() const { return input_capacities.size(); }
  Eigen::Index num_output_ports() const { return output_capacities.size(); }

  /// Square switch with every port at the same capacity.
  static SwitchConfig uniform(int ports, double capacity = 1.0);

  /// Every capacity multiplied by `factor` (the speed-up switch uses 4p).
  SwitchConfig scaled(double factor) const;

  bool operator==(const SwitchConfig& other) const;
};

struct FlowSpec {
  int input_port = 0;
  int output_port = 0;
  double demand = 0.0;

  bool operator==(const FlowSpec&) const = default;
};

struct CoflowSpec {
  int id = 0;
  double weight = 1.0;
  double release_time = 0.0;
  std::vector<FlowSpec> flows;

  bool operator==(const CoflowSpec&) const = default;
};

enum class InstanceKind { kGeneral, kConcurrentOpenShop };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& name);

struct Instance {
  SwitchConfig switch_config;
  std::vector<CoflowSpec> coflows;
  InstanceKind kind = InstanceKind::kGeneral;
  // Free-form provenance (generator name, seed, PRNG identifier).
  std::map<std::string, std::string> metadata;

  bool operator==(const Instance&) const = default;
};

/// Identifies one flow: the coflow id together with its port pair.
struct FlowKey {
  int coflow = 0;
  int input_port = 0;
  int output_port = 0;

  auto operator<=>(const FlowKey&) const = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& key) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(key.coflow);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(key.input_port);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(key.output_port);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Checks every structural invariant of the instance and returns it unchanged.
/// Throws ValidationError naming the offending coflow id and flow index.
Instance validate_instance(Instance raw);

/// Maximum number of flows in any coflow at time zero.
/// Throws ValidationError on an instance without coflows.
int compute_p(const Instance& instance);

/// Total demand of each coflow per input port (column k) and per output port.
/// Rows are ports, columns follow the order of `instance.coflows`.
Eigen::MatrixXd input_port_loads(const Instance& instance);
Eigen::MatrixXd output_port_loads(const Instance& instance);

/// Copy of the instance with every weight replaced by 1.
Instance with_unit_weights(Instance instance);

std::size_t total_flow_count(const Instance& instance);

}  // namespace coflow
