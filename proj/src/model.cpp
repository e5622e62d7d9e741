#include "coflow/model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace coflow {

namespace {

std::string where(const CoflowSpec& coflow) {
  return "coflow " + std::to_string(coflow.id);
}

std::string where(const CoflowSpec& coflow, std::size_t flow_index) {
  return where(coflow) + ", flow " + std::to_string(flow_index);
}

void check_capacities(const Vector& capacities, const char* side) {
  for (Eigen::Index i = 0; i < capacities.size(); ++i) {
    const double c = capacities[i];
    if (!std::isfinite(c) || c <= 0.0) {
      std::ostringstream msg;
      msg << side << " capacity of port " << i << " must be positive and finite, got " << c;
      throw ValidationError(msg.str());
    }
  }
}

}  // namespace

SwitchConfig SwitchConfig::uniform(int ports, double capacity) {
  SwitchConfig config;
  config.input_capacities = Vector::Constant(ports, capacity);
  config.output_capacities = Vector::Constant(ports, capacity);
  return config;
}

SwitchConfig SwitchConfig::scaled(double factor) const {
  SwitchConfig config;
  config.input_capacities = input_capacities * factor;
  config.output_capacities = output_capacities * factor;
  return config;
}

bool SwitchConfig::operator==(const SwitchConfig& other) const {
  return input_capacities.size() == other.input_capacities.size() &&
         output_capacities.size() == other.output_capacities.size() &&
         input_capacities == other.input_capacities &&
         output_capacities == other.output_capacities;
}

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kGeneral:
      return "general";
    case InstanceKind::kConcurrentOpenShop:
      return "concurrent-open-shop";
  }
  return "general";
}

InstanceKind instance_kind_from_string(const std::string& name) {
  if (name == "general") return InstanceKind::kGeneral;
  if (name == "concurrent-open-shop") return InstanceKind::kConcurrentOpenShop;
  throw ValidationError("unknown instance kind '" + name + "'");
}

Instance validate_instance(Instance raw) {
  const auto& sw = raw.switch_config;
  if (sw.num_input_ports() < 1 || sw.num_output_ports() < 1) {
    throw ValidationError("switch needs at least one input and one output port");
  }
  check_capacities(sw.input_capacities, "input");
  check_capacities(sw.output_capacities, "output");

  const bool cos = raw.kind == InstanceKind::kConcurrentOpenShop;
  if (cos && ((sw.input_capacities.array() != 1.0).any() ||
              (sw.output_capacities.array() != 1.0).any())) {
    throw ValidationError("concurrent-open-shop instances require unit capacities");
  }

  std::unordered_set<int> ids;
  for (const auto& coflow : raw.coflows) {
    if (!ids.insert(coflow.id).second) {
      throw ValidationError("duplicate coflow id " + std::to_string(coflow.id));
    }
    if (!std::isfinite(coflow.weight) || coflow.weight <= 0.0) {
      throw ValidationError(where(coflow) + ": weight must be positive and finite");
    }
    if (!std::isfinite(coflow.release_time) || coflow.release_time < 0.0) {
      throw ValidationError(where(coflow) + ": release time must be finite and nonnegative");
    }
    if (coflow.flows.empty()) {
      throw ValidationError(where(coflow) + ": a coflow needs at least one flow");
    }
    std::set<std::pair<int, int>> pairs;
    for (std::size_t f = 0; f < coflow.flows.size(); ++f) {
      const auto& flow = coflow.flows[f];
      if (flow.input_port < 0 || flow.input_port >= sw.num_input_ports() ||
          flow.output_port < 0 || flow.output_port >= sw.num_output_ports()) {
        throw ValidationError(where(coflow, f) + ": port pair (" + std::to_string(flow.input_port) +
                              "," + std::to_string(flow.output_port) + ") out of range");
      }
      if (!std::isfinite(flow.demand) || flow.demand <= 0.0) {
        throw ValidationError(where(coflow, f) + ": demand must be positive and finite");
      }
      if (!pairs.emplace(flow.input_port, flow.output_port).second) {
        throw ValidationError(where(coflow, f) + ": duplicate port pair (" +
                              std::to_string(flow.input_port) + "," +
                              std::to_string(flow.output_port) + ")");
      }
      if (cos && flow.input_port != flow.output_port) {
        throw ValidationError(where(coflow, f) +
                              ": concurrent-open-shop flows must use input port == output port");
      }
    }
  }
  return raw;
}

int compute_p(const Instance& instance) {
  if (instance.coflows.empty()) {
    throw ValidationError("p is undefined for an instance without coflows");
  }
  std::size_t p = 0;
  for (const auto& coflow : instance.coflows) p = std::max(p, coflow.flows.size());
  return static_cast<int>(p);
}

Eigen::MatrixXd input_port_loads(const Instance& instance) {
  Eigen::MatrixXd loads = Eigen::MatrixXd::Zero(instance.switch_config.num_input_ports(),
                                                static_cast<Eigen::Index>(instance.coflows.size()));
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    for (const auto& flow : instance.coflows[k].flows) {
      loads(flow.input_port, static_cast<Eigen::Index>(k)) += flow.demand;
    }
  }
  return loads;
}

Eigen::MatrixXd output_port_loads(const Instance& instance) {
  Eigen::MatrixXd loads = Eigen::MatrixXd::Zero(instance.switch_config.num_output_ports(),
                                                static_cast<Eigen::Index>(instance.coflows.size()));
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    for (const auto& flow : instance.coflows[k].flows) {
      loads(flow.output_port, static_cast<Eigen::Index>(k)) += flow.demand;
    }
  }
  return loads;
}

Instance with_unit_weights(Instance instance) {
  for (auto& coflow : instance.coflows) coflow.weight = 1.0;
  return instance;
}

std::size_t total_flow_count(const Instance& instance) {
  std::size_t count = 0;
  for (const auto& coflow : instance.coflows) count += coflow.flows.size();
  return count;
}

}  // namespace coflow
