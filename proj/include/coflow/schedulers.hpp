#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coflow/engine.hpp"
#include "coflow/model.hpp"

namespace coflow {

/// Sum of coflow weights over the given flows, per input and per output port.
struct PortWeights {
  Vector input;
  Vector output;
};

PortWeights port_weight_sums(std::span<const ActiveFlow> flows, const SwitchConfig& sw);

// BlindFlow: each active flow (k,i,j) gets
//     w_k / ( W_out[j] / c_out[j] + W_in[i] / c_in[i] )
// where W_out[j], W_in[i] add the weights of the released, unfinished flows
// touching that port (a flow on both ports is counted in both sums).
RateAllocation blindflow_rates(const SchedulerView& view, const SwitchConfig& sw);

// Same as blindflow_rates with the two port terms combined by max instead of +.
RateAllocation blindflow_max_rates(const SchedulerView& view, const SwitchConfig& sw);

// Non-causal baseline: the BlindFlow formula with the port sums taken over
// every unfinished flow, released or not, and coflow k held at rate 0 until
// t >= 4p R_k. Needs view.all_flows_unfinished.
RateAllocation baseline_rates(const SchedulerView& view, const SwitchConfig& sw, int p);

// Speed-up switch allocation: 4p times the baseline formula, starting at R_k.
// Meant for runs whose capacities are multiplied by 4p.
RateAllocation augmented_rates(const SchedulerView& view, const SwitchConfig& sw, int p);

// Concurrent open shop: flow (k,i,i) gets w_k / sum of weights on port i.
// Throws ValidationError on an off-diagonal flow or a non-unit capacity.
RateAllocation cos_rates(const SchedulerView& view, const SwitchConfig& sw);

struct AaloConfig {
  int num_queues = 10;
  double first_threshold = 10.0;  // volume
  double threshold_multiplier = 10.0;

  /// Upper attained-service bound of queue q (the last queue is unbounded).
  double threshold(int q) const;
  int queue_of(double attained) const;
  void validate() const;
};

/// Attained-service comparator: coflows are binned by volume served so far,
/// lower bins first; inside a bin, FIFO by release time. Each flow in that order
/// takes whatever capacity both of its ports still have.
RateAllocation aalo_like_rates(const SchedulerView& view, const SwitchConfig& sw,
                               const AaloConfig& config, const std::map<int, double>& attained);

class BlindFlowScheduler : public Scheduler {
 public:
  explicit BlindFlowScheduler(SwitchConfig sw) : switch_(std::move(sw)) {}
  std::string name() const override { return "blindflow"; }
  RateAllocation allocate(const SchedulerView& view) override { return blindflow_rates(view, switch_); }

 private:
  SwitchConfig switch_;
};

class BlindFlowMaxScheduler : public Scheduler {
 public:
  explicit BlindFlowMaxScheduler(SwitchConfig sw) : switch_(std::move(sw)) {}
  std::string name() const override { return "blindflow-max"; }
  RateAllocation allocate(const SchedulerView& view) override {
    return blindflow_max_rates(view, switch_);
  }

 private:
  SwitchConfig switch_;
};

class BaselineScheduler : public Scheduler {
 public:
  BaselineScheduler(SwitchConfig sw, int p) : switch_(std::move(sw)), p_(p) {}
  std::string name() const override { return "baseline"; }
  SimulationMode mode() const override { return SimulationMode::kNonCausal; }
  double activation_time(const CoflowSpec& coflow) const override {
    return 4.0 * p_ * coflow.release_time;
  }
  RateAllocation allocate(const SchedulerView& view) override { return baseline_rates(view, switch_, p_); }

 private:
  SwitchConfig switch_;
  int p_;
};

class AugmentedScheduler : public Scheduler {
 public:
  AugmentedScheduler(SwitchConfig sw, int p) : switch_(std::move(sw)), p_(p) {}
  std::string name() const override { return "augmented"; }
  SimulationMode mode() const override { return SimulationMode::kNonCausal; }
  RateAllocation allocate(const SchedulerView& view) override {
    return augmented_rates(view, switch_, p_);
  }

 private:
  SwitchConfig switch_;
  int p_;
};

class CosScheduler : public Scheduler {
 public:
  explicit CosScheduler(SwitchConfig sw) : switch_(std::move(sw)) {}
  std::string name() const override { return "cos"; }
  RateAllocation allocate(const SchedulerView& view) override { return cos_rates(view, switch_); }

 private:
  SwitchConfig switch_;
};

/// Owns the attained-service bookkeeping: rates are constant between calls, so
/// the service each coflow received since the previous call is exact.
class AaloLikeScheduler : public Scheduler {
 public:
  AaloLikeScheduler(SwitchConfig sw, AaloConfig config);
  std::string name() const override { return "aalo-like"; }
  RateAllocation allocate(const SchedulerView& view) override;
  double next_decision_time(const SchedulerView& view, const RateAllocation& rates) const override;

  const std::map<int, double>& attained() const { return attained_; }

 private:
  SwitchConfig switch_;
  AaloConfig config_;
  std::map<int, double> attained_;
  std::map<int, double> last_rate_;  // per coflow, summed over its flows
  double last_time_ = 0.0;
};

/// Names accepted by make_scheduler.
const std::vector<std::string>& scheduler_names();

/// Builds a fresh scheduler by name for one run on `instance`.
/// Throws ValidationError for unknown names and for `cos` on a general instance.
std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const Instance& instance,
                                          const AaloConfig& aalo = {});

/// 4p for `augmented`, 1 otherwise.
double capacity_multiplier_for(const std::string& name, const Instance& instance);

/// make_scheduler + simulate with the matching capacity multiplier.
SimulationResult run_algorithm(const Instance& instance, const std::string& name,
                               TimelineDetail detail = TimelineDetail::kFull,
                               const AaloConfig& aalo = {});

}  // namespace coflow
