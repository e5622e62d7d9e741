#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "coflow/model.hpp"

namespace coflow {

/// Causal schedulers only ever see released coflows and must stay within port
/// capacities. Non-causal ones are analysis devices: they also see every
/// unfinished flow of coflows not yet released, and capacity overruns are
/// recorded in the result instead of raised.
enum class SimulationMode { kCausal, kNonCausal };

std::string to_string(SimulationMode mode);

struct ActiveFlow {
  FlowKey key;
  double weight = 1.0;
  double release_time = 0.0;
};

/// Everything a non-clairvoyant scheduler is allowed to know at time `now`.
/// There is deliberately no demand or remaining-volume field.
struct SchedulerView {
  double now = 0.0;
  std::vector<ActiveFlow> active_flows;
  // Filled only in non-causal mode; superset of active_flows.
  std::vector<ActiveFlow> all_flows_unfinished;
  int p = 1;
};

struct RateEntry {
  FlowKey key;
  double rate = 0.0;
};

/// Rates for the flows a scheduler was shown as active, constant until the
/// next event.
struct RateAllocation {
  std::vector<RateEntry> entries;

  void set(const FlowKey& key, double rate) { entries.push_back({key, rate}); }
  /// Rate of `key`, or 0 when absent. Linear scan.
  double rate(const FlowKey& key) const;
  std::size_t size() const { return entries.size(); }
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual std::string name() const = 0;
  virtual SimulationMode mode() const { return SimulationMode::kCausal; }

  /// Instant from which the coflow's flows are offered to allocate(). For
  /// causal schedulers the engine never lets this precede the release time.
  virtual double activation_time(const CoflowSpec& coflow) const { return coflow.release_time; }

  virtual RateAllocation allocate(const SchedulerView& view) = 0;

  /// Earliest future instant at which the scheduler wants to be re-invoked
  /// even if no release or completion happens (e.g. a priority demotion).
  virtual double next_decision_time(const SchedulerView& /*view*/,
                                    const RateAllocation& /*rates*/) const {
    return std::numeric_limits<double>::infinity();
  }
};

enum class TimelineDetail {
  kNone,        // completions only
  kIndicators,  // per segment: the set of unfinished flows
  kFull,        // indicators plus the rate of every active flow
};

struct SimulationOptions {
  // Multiplies every port capacity; 4p for runs on the speed-up switch.
  double capacity_multiplier = 1.0;
  TimelineDetail timeline = TimelineDetail::kFull;
  double feasibility_tolerance = 1e-9;
};

struct FlowRecord {
  FlowKey key;
  std::size_t coflow_index = 0;  // position in Instance::coflows
  double demand = 0.0;
  double completion = 0.0;
};

struct SegmentRate {
  std::uint32_t flow = 0;  // index into SimulationResult::flows
  double rate = 0.0;
};

/// Rates are constant on [t_start, t_end). `unfinished` holds every flow with
/// remaining demand during the segment, whether or not it is active yet.
struct TimelineSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<std::uint32_t> unfinished;
  std::vector<SegmentRate> rates;
};

struct SimulationResult {
  std::string algorithm;
  SimulationMode mode = SimulationMode::kCausal;
  double capacity_multiplier = 1.0;
  TimelineDetail detail = TimelineDetail::kFull;

  std::vector<FlowRecord> flows;
  std::vector<int> coflow_ids;   // instance order
  Vector coflow_completion;      // T_k, aligned with coflow_ids
  double weighted_total = 0.0;   // sum_k w_k T_k
  std::vector<TimelineSegment> timeline;
  // min over segments and ports of (capacity - allocated load); +inf if no segment.
  double feasibility_margin = std::numeric_limits<double>::infinity();
  std::size_t num_events = 0;

  double makespan() const { return coflow_completion.size() == 0 ? 0.0 : coflow_completion.maxCoeff(); }
};

/// Event-driven run of `scheduler` on `instance`. Rates are piecewise constant
/// between events (activations, completions, scheduler wake-ups); events closer
/// than 1e-12 (relative) are coalesced.
SimulationResult simulate(const Instance& instance, Scheduler& scheduler,
                          const SimulationOptions& options = {});

/// sum_k w_k T_k with T_k measured from time zero.
double weighted_completion_time(const SimulationResult& result, const Instance& instance);

nlohmann::json result_to_json(const SimulationResult& result, bool include_timeline = false);

}  // namespace coflow
