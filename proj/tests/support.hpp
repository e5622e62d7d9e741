#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "coflow/engine.hpp"
#include "coflow/model.hpp"
#include "coflow/random.hpp"
#include "coflow/workloads.hpp"

namespace coflow::testing {

// Two coflows on a 2x2 switch; coflow 1 uses (0,0),(1,0), coflow 2 uses (0,0),(0,1),(1,1).
inline Instance example_2x2() {
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(2);
  inst.coflows = {
      {1, 1.0, 0.0, {{0, 0, 1.0}, {1, 0, 1.0}}},
      {2, 2.0, 0.0, {{0, 0, 2.0}, {0, 1, 2.0}, {1, 1, 2.0}}},
  };
  return validate_instance(inst);
}

inline Instance single_flow(double weight = 1.0, double demand = 1.0, double release = 0.0) {
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(1);
  inst.coflows = {{1, weight, release, {{0, 0, demand}}}};
  return validate_instance(inst);
}

inline Instance empty_instance(int ports = 1) {
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(ports);
  return validate_instance(inst);
}

// Active flows of every coflow in `inst`, all treated as released.
inline std::vector<ActiveFlow> all_active(const Instance& inst) {
  std::vector<ActiveFlow> flows;
  for (const auto& c : inst.coflows) {
    for (const auto& f : c.flows) flows.push_back({{c.id, f.input_port, f.output_port}, c.weight, c.release_time});
  }
  return flows;
}

inline SchedulerView view_of(const Instance& inst, double now = 0.0) {
  SchedulerView view;
  view.now = now;
  view.active_flows = all_active(inst);
  view.all_flows_unfinished = view.active_flows;
  view.p = compute_p(inst);
  return view;
}

// Concurrent open shop: diagonal flows, unit capacities, integer loads.
inline Instance random_cos(std::uint64_t seed, int max_coflows, int max_ports, int max_load,
                           int max_weight = 3, bool zero_release = true) {
  SplitMix64 rng(seed);
  const int m = static_cast<int>(rng.uniform_int(1, max_ports));
  const int n = static_cast<int>(rng.uniform_int(1, max_coflows));
  Instance inst;
  inst.kind = InstanceKind::kConcurrentOpenShop;
  inst.switch_config = SwitchConfig::uniform(m);
  for (int k = 0; k < n; ++k) {
    CoflowSpec c;
    c.id = k + 1;
    c.weight = static_cast<double>(rng.uniform_int(1, max_weight));
    c.release_time = zero_release ? 0.0 : static_cast<double>(rng.uniform_int(0, 2));
    for (int port = 0; port < m; ++port) {
      if (rng.uniform_int(0, 1) == 1) {
        c.flows.push_back({port, port, static_cast<double>(rng.uniform_int(1, max_load))});
      }
    }
    if (c.flows.empty()) {
      const int port = static_cast<int>(rng.uniform_int(0, m - 1));
      c.flows.push_back({port, port, static_cast<double>(rng.uniform_int(1, max_load))});
    }
    inst.coflows.push_back(std::move(c));
  }
  return validate_instance(inst);
}

// General instance with integer demands, releases on the integer grid.
inline Instance random_tiny_general(std::uint64_t seed, int max_coflows, int max_ports, int max_load,
                                    int max_release) {
  SplitMix64 rng(seed);
  const int ports = static_cast<int>(rng.uniform_int(1, max_ports));
  const int n = static_cast<int>(rng.uniform_int(1, max_coflows));
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(ports);
  for (int k = 0; k < n; ++k) {
    CoflowSpec c;
    c.id = k + 1;
    c.weight = static_cast<double>(rng.uniform_int(1, 3));
    c.release_time = static_cast<double>(rng.uniform_int(0, max_release));
    for (int i = 0; i < ports; ++i) {
      for (int j = 0; j < ports; ++j) {
        if (rng.uniform_int(0, 2) == 0) c.flows.push_back({i, j, static_cast<double>(rng.uniform_int(1, max_load))});
      }
    }
    if (c.flows.empty()) c.flows.push_back({0, 0, static_cast<double>(rng.uniform_int(1, max_load))});
    inst.coflows.push_back(std::move(c));
  }
  return validate_instance(inst);
}

// Port loads of one timeline segment (rates at multiplier 1) against capacity.
inline double segment_worst_excess(const SimulationResult& result, const TimelineSegment& seg,
                                   const SwitchConfig& sw) {
  Vector in = Vector::Zero(sw.num_input_ports());
  Vector out = Vector::Zero(sw.num_output_ports());
  for (const auto& r : seg.rates) {
    const auto& key = result.flows[r.flow].key;
    in[key.input_port] += r.rate;
    out[key.output_port] += r.rate;
  }
  const double m = result.capacity_multiplier;
  return std::max((in - m * sw.input_capacities).maxCoeff(), (out - m * sw.output_capacities).maxCoeff());
}

}  // namespace coflow::testing
