#include "coflow/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace coflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Combine { kSum, kMax };

// Shared kernel of the BlindFlow, baseline and augmented rates:
// weights are summed over `denominator_flows`, rates handed to `active`.
RateAllocation weighted_share(std::span<const ActiveFlow> active,
                              std::span<const ActiveFlow> denominator_flows,
                              const SwitchConfig& sw, Combine combine, double scale) {
  const PortWeights sums = port_weight_sums(denominator_flows, sw);
  RateAllocation out;
  out.entries.reserve(active.size());
  for (const auto& flow : active) {
    const double out_term = sums.output[flow.key.output_port] / sw.output_capacities[flow.key.output_port];
    const double in_term = sums.input[flow.key.input_port] / sw.input_capacities[flow.key.input_port];
    const double denom = combine == Combine::kSum ? out_term + in_term : std::max(out_term, in_term);
    out.set(flow.key, scale * flow.weight / denom);
  }
  return out;
}

void require_non_causal(const SchedulerView& view, const char* who) {
  if (view.all_flows_unfinished.size() < view.active_flows.size()) {
    throw ValidationError(std::string(who) + " needs the non-causal view of all unfinished flows");
  }
}

}  // namespace

PortWeights port_weight_sums(std::span<const ActiveFlow> flows, const SwitchConfig& sw) {
  PortWeights sums{Vector::Zero(sw.num_input_ports()), Vector::Zero(sw.num_output_ports())};
  for (const auto& flow : flows) {
    sums.input[flow.key.input_port] += flow.weight;
    sums.output[flow.key.output_port] += flow.weight;
  }
  return sums;
}

RateAllocation blindflow_rates(const SchedulerView& view, const SwitchConfig& sw) {
  return weighted_share(view.active_flows, view.active_flows, sw, Combine::kSum, 1.0);
}

RateAllocation blindflow_max_rates(const SchedulerView& view, const SwitchConfig& sw) {
  return weighted_share(view.active_flows, view.active_flows, sw, Combine::kMax, 1.0);
}

RateAllocation baseline_rates(const SchedulerView& view, const SwitchConfig& sw, int p) {
  require_non_causal(view, "baseline_rates");
  RateAllocation out =
      weighted_share(view.active_flows, view.all_flows_unfinished, sw, Combine::kSum, 1.0);
  // Held back until 4p R_k.
  for (std::size_t f = 0; f < out.entries.size(); ++f) {
    if (view.now < 4.0 * p * view.active_flows[f].release_time) out.entries[f].rate = 0.0;
  }
  return out;
}

RateAllocation augmented_rates(const SchedulerView& view, const SwitchConfig& sw, int p) {
  require_non_causal(view, "augmented_rates");
  RateAllocation out =
      weighted_share(view.active_flows, view.all_flows_unfinished, sw, Combine::kSum, 4.0 * p);
  for (std::size_t f = 0; f < out.entries.size(); ++f) {
    if (view.now < view.active_flows[f].release_time) out.entries[f].rate = 0.0;
  }
  return out;
}

RateAllocation cos_rates(const SchedulerView& view, const SwitchConfig& sw) {
  if ((sw.input_capacities.array() != 1.0).any() || (sw.output_capacities.array() != 1.0).any()) {
    throw ValidationError("cos scheduler requires unit capacities");
  }
  for (const auto& flow : view.active_flows) {
    if (flow.key.input_port != flow.key.output_port) {
      throw ValidationError("cos scheduler requires diagonal coflows, got flow " +
                            std::to_string(flow.key.input_port) + "->" +
                            std::to_string(flow.key.output_port) + " of coflow " +
                            std::to_string(flow.key.coflow));
    }
  }
  const PortWeights sums = port_weight_sums(view.active_flows, sw);
  RateAllocation out;
  out.entries.reserve(view.active_flows.size());
  for (const auto& flow : view.active_flows) {
    out.set(flow.key, flow.weight / sums.input[flow.key.input_port]);
  }
  return out;
}

double AaloConfig::threshold(int q) const {
  if (q >= num_queues - 1) return kInf;
  return first_threshold * std::pow(threshold_multiplier, q);
}

int AaloConfig::queue_of(double attained) const {
  int q = 0;
  while (q < num_queues - 1 && attained >= threshold(q)) ++q;
  return q;
}

void AaloConfig::validate() const {
  if (num_queues < 1) throw ValidationError("aalo: num_queues must be positive");
  if (!(first_threshold > 0.0)) throw ValidationError("aalo: first_threshold must be positive");
  if (!(threshold_multiplier > 1.0)) throw ValidationError("aalo: threshold_multiplier must exceed 1");
}

RateAllocation aalo_like_rates(const SchedulerView& view, const SwitchConfig& sw,
                               const AaloConfig& config, const std::map<int, double>& attained) {
  auto queue = [&](int coflow) {
    auto it = attained.find(coflow);
    return config.queue_of(it == attained.end() ? 0.0 : it->second);
  };

  std::vector<std::size_t> order(view.active_flows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<int> queues(view.active_flows.size());
  for (std::size_t f = 0; f < order.size(); ++f) queues[f] = queue(view.active_flows[f].key.coflow);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = view.active_flows[a];
    const auto& fb = view.active_flows[b];
    if (queues[a] != queues[b]) return queues[a] < queues[b];
    if (fa.release_time != fb.release_time) return fa.release_time < fb.release_time;
    return fa.key < fb.key;
  });

  Vector in_left = sw.input_capacities;
  Vector out_left = sw.output_capacities;
  std::vector<double> rate(order.size(), 0.0);
  for (auto f : order) {
    const auto& key = view.active_flows[f].key;
    const double r = std::max(0.0, std::min(in_left[key.input_port], out_left[key.output_port]));
    rate[f] = r;
    in_left[key.input_port] -= r;
    out_left[key.output_port] -= r;
  }

  RateAllocation out;
  out.entries.reserve(order.size());
  for (std::size_t f = 0; f < order.size(); ++f) out.set(view.active_flows[f].key, rate[f]);
  return out;
}

AaloLikeScheduler::AaloLikeScheduler(SwitchConfig sw, AaloConfig config)
    : switch_(std::move(sw)), config_(config) {
  config_.validate();
}

RateAllocation AaloLikeScheduler::allocate(const SchedulerView& view) {
  const double dt = view.now - last_time_;
  for (const auto& [coflow, r] : last_rate_) attained_[coflow] += r * dt;
  last_time_ = view.now;

  RateAllocation rates = aalo_like_rates(view, switch_, config_, attained_);
  last_rate_.clear();
  for (const auto& e : rates.entries) last_rate_[e.key.coflow] += e.rate;
  return rates;
}

double AaloLikeScheduler::next_decision_time(const SchedulerView& view,
                                             const RateAllocation& /*rates*/) const {
  // Next instant some served coflow crosses into a lower-priority queue.
  double next = kInf;
  for (const auto& [coflow, r] : last_rate_) {
    if (r <= 0.0) continue;
    auto it = attained_.find(coflow);
    const double served = it == attained_.end() ? 0.0 : it->second;
    const double limit = config_.threshold(config_.queue_of(served));
    if (std::isfinite(limit)) next = std::min(next, view.now + (limit - served) / r);
  }
  return next;
}

const std::vector<std::string>& scheduler_names() {
  static const std::vector<std::string> names = {"blindflow", "blindflow-max", "baseline",
                                                 "augmented", "cos", "aalo-like"};
  return names;
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const Instance& instance,
                                          const AaloConfig& aalo) {
  const SwitchConfig& sw = instance.switch_config;
  if (name == "blindflow") return std::make_unique<BlindFlowScheduler>(sw);
  if (name == "blindflow-max") return std::make_unique<BlindFlowMaxScheduler>(sw);
  if (name == "aalo-like") return std::make_unique<AaloLikeScheduler>(sw, aalo);
  if (name == "cos") {
    if (instance.kind != InstanceKind::kConcurrentOpenShop) {
      throw ValidationError("the cos scheduler only runs on concurrent-open-shop instances");
    }
    return std::make_unique<CosScheduler>(sw);
  }
  if (name == "baseline" || name == "augmented") {
    const int p = instance.coflows.empty() ? 1 : compute_p(instance);
    if (name == "baseline") return std::make_unique<BaselineScheduler>(sw, p);
    return std::make_unique<AugmentedScheduler>(sw, p);
  }
  throw ValidationError("unknown algorithm '" + name + "'");
}

double capacity_multiplier_for(const std::string& name, const Instance& instance) {
  if (name != "augmented" || instance.coflows.empty()) return 1.0;
  return 4.0 * compute_p(instance);
}

SimulationResult run_algorithm(const Instance& instance, const std::string& name,
                               TimelineDetail detail, const AaloConfig& aalo) {
  auto scheduler = make_scheduler(name, instance, aalo);
  SimulationOptions options;
  options.capacity_multiplier = capacity_multiplier_for(name, instance);
  options.timeline = detail;
  return simulate(instance, *scheduler, options);
}

}  // namespace coflow
