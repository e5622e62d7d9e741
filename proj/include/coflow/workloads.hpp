#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>

#include "coflow/instance_io.hpp"
#include "coflow/model.hpp"

namespace coflow {

struct WeightRange {
  int lo = 1;
  int hi = 1;
};

struct SyntheticParams {
  int n = 20;        // coflows
  int m = 15;        // ports per side
  int p_max = 140;   // max flows per coflow
  int max_demand = 15;
  double last_release = 50.0;
  std::uint64_t seed = 1;
  // Unit weights unless set; otherwise integer weights uniform on [lo, hi].
  std::optional<WeightRange> weights;

  void validate() const;
};

/// Per coflow: flow count uniform on 1..p_max, that many distinct port pairs
/// drawn without replacement, integer demands uniform on 1..max_demand, release
/// uniform on [0, last_release]. Unit capacities. Pure function of params.
Instance generate_synthetic(const SyntheticParams& params);

/// Parses "uniform:a,b" into a weight range.
WeightRange parse_weight_spec(const std::string& spec);

// Coflow-benchmark trace layout:
//   <num_ports> <num_coflows>
//   <id> <arrival_ms> <num_mappers> <mapper>... <num_reducers> <reducer>:<shuffle_MB>...
// Mappers become input ports and reducers output ports. Each reducer's shuffle
// volume is split evenly across the coflow's mappers; repeated (mapper,
// reducer) pairs are merged. Releases are in seconds, demands in MB, and every
// port runs at `capacity_mbps` (MB per second).
struct TraceOptions {
  double capacity_mbps = 1.0;
  std::optional<std::size_t> first;  // keep only the first N coflows
};

Instance parse_trace(std::istream& in, const TraceOptions& options,
                     const std::string& source_name = "<trace>");
Instance import_trace(const std::filesystem::path& path, const TraceOptions& options);

}  // namespace coflow
