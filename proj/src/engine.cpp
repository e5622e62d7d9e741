#include "coflow/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace coflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two event times closer than this are treated as simultaneous.
double coalesce_tolerance(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

std::string describe(const FlowKey& key) {
  std::ostringstream out;
  out << "(coflow " << key.coflow << ", " << key.input_port << "->" << key.output_port << ")";
  return out.str();
}

}  // namespace

std::string to_string(SimulationMode mode) {
  return mode == SimulationMode::kCausal ? "causal" : "non-causal";
}

double RateAllocation::rate(const FlowKey& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return e.rate;
  }
  return 0.0;
}

SimulationResult simulate(const Instance& instance, Scheduler& scheduler,
                          const SimulationOptions& options) {
  if (!(options.capacity_multiplier > 0.0) || !std::isfinite(options.capacity_multiplier)) {
    throw ValidationError("capacity multiplier must be positive and finite");
  }

  SimulationResult result;
  result.algorithm = scheduler.name();
  result.mode = scheduler.mode();
  result.capacity_multiplier = options.capacity_multiplier;
  result.detail = options.timeline;

  const bool causal = result.mode == SimulationMode::kCausal;
  const SwitchConfig capacity = instance.switch_config.scaled(options.capacity_multiplier);
  const std::size_t num_coflows = instance.coflows.size();

  result.coflow_ids.reserve(num_coflows);
  result.coflow_completion = Vector::Zero(static_cast<Eigen::Index>(num_coflows));

  std::unordered_map<FlowKey, std::uint32_t, FlowKeyHash> index_of;
  std::vector<double> activation(num_coflows);
  for (std::size_t k = 0; k < num_coflows; ++k) {
    const auto& coflow = instance.coflows[k];
    result.coflow_ids.push_back(coflow.id);
    double start = scheduler.activation_time(coflow);
    if (causal) start = std::max(start, coflow.release_time);
    activation[k] = start;
    for (const auto& flow : coflow.flows) {
      FlowKey key{coflow.id, flow.input_port, flow.output_port};
      index_of.emplace(key, static_cast<std::uint32_t>(result.flows.size()));
      result.flows.push_back({key, k, flow.demand, kInf});
    }
  }
  if (result.flows.empty()) {
    result.weighted_total = 0.0;
    return result;
  }

  std::vector<double> activations = activation;
  std::sort(activations.begin(), activations.end());

  const std::size_t num_flows = result.flows.size();
  std::vector<double> remaining(num_flows);
  std::vector<double> served(num_flows, 0.0);
  std::vector<bool> finished(num_flows, false);
  std::vector<double> rate(num_flows, 0.0);
  std::vector<int> assigned(num_flows, -1);  // epoch marker against duplicates
  for (std::size_t f = 0; f < num_flows; ++f) remaining[f] = result.flows[f].demand;

  const int p = compute_p(instance);
  std::size_t unfinished_total = num_flows;
  double now = 0.0;
  int epoch = 0;

  Vector in_load(capacity.num_input_ports());
  Vector out_load(capacity.num_output_ports());
  std::vector<std::uint32_t> active;
  active.reserve(num_flows);

  while (unfinished_total > 0) {
    ++epoch;
    ++result.num_events;
    const double tol_now = coalesce_tolerance(now);

    SchedulerView view;
    view.now = now;
    view.p = p;
    active.clear();
    for (std::uint32_t f = 0; f < num_flows; ++f) {
      if (finished[f]) continue;
      const auto& rec = result.flows[f];
      const auto& coflow = instance.coflows[rec.coflow_index];
      const ActiveFlow shown{rec.key, coflow.weight, coflow.release_time};
      if (activation[rec.coflow_index] <= now + tol_now) {
        active.push_back(f);
        view.active_flows.push_back(shown);
      }
      if (!causal) view.all_flows_unfinished.push_back(shown);
    }

    const RateAllocation allocation = scheduler.allocate(view);
    if (allocation.size() != active.size()) {
      std::ostringstream msg;
      msg << scheduler.name() << " returned " << allocation.size() << " rates for "
          << active.size() << " active flows at t=" << now;
      throw InvariantViolation(msg.str());
    }
    for (auto f : active) rate[f] = 0.0;
    for (const auto& entry : allocation.entries) {
      auto it = index_of.find(entry.key);
      if (it == index_of.end() || finished[it->second] ||
          activation[result.flows[it->second].coflow_index] > now + tol_now) {
        throw InvariantViolation(scheduler.name() + " assigned a rate to unknown or inactive flow " +
                                 describe(entry.key));
      }
      if (assigned[it->second] == epoch) {
        throw InvariantViolation(scheduler.name() + " assigned two rates to flow " +
                                 describe(entry.key));
      }
      if (!std::isfinite(entry.rate) || entry.rate < 0.0) {
        std::ostringstream msg;
        msg << scheduler.name() << " assigned invalid rate " << entry.rate << " to flow "
            << describe(entry.key);
        throw InvariantViolation(msg.str());
      }
      assigned[it->second] = epoch;
      rate[it->second] = entry.rate;
    }

    in_load.setZero();
    out_load.setZero();
    for (auto f : active) {
      in_load[result.flows[f].key.input_port] += rate[f];
      out_load[result.flows[f].key.output_port] += rate[f];
    }
    const Vector in_slack = capacity.input_capacities - in_load;
    const Vector out_slack = capacity.output_capacities - out_load;
    const double margin = std::min(in_slack.minCoeff(), out_slack.minCoeff());
    if (causal) {
      for (Eigen::Index i = 0; i < in_slack.size(); ++i) {
        const double tol = options.feasibility_tolerance * std::max(1.0, capacity.input_capacities[i]);
        if (in_slack[i] < -tol) {
          std::ostringstream msg;
          msg << scheduler.name() << " overloads input port " << i << " at t=" << now << " ("
              << in_load[i] << " > " << capacity.input_capacities[i] << ")";
          throw InvariantViolation(msg.str());
        }
      }
      for (Eigen::Index j = 0; j < out_slack.size(); ++j) {
        const double tol = options.feasibility_tolerance * std::max(1.0, capacity.output_capacities[j]);
        if (out_slack[j] < -tol) {
          std::ostringstream msg;
          msg << scheduler.name() << " overloads output port " << j << " at t=" << now << " ("
              << out_load[j] << " > " << capacity.output_capacities[j] << ")";
          throw InvariantViolation(msg.str());
        }
      }
    }

    double next = kInf;
    auto upcoming = std::upper_bound(activations.begin(), activations.end(), now + tol_now);
    if (upcoming != activations.end()) next = *upcoming;
    for (auto f : active) {
      if (rate[f] > 0.0) next = std::min(next, now + remaining[f] / rate[f]);
    }
    const double wake = scheduler.next_decision_time(view, allocation);
    if (wake > now + tol_now) next = std::min(next, wake);
    if (!std::isfinite(next)) {
      std::ostringstream msg;
      msg << scheduler.name() << " starves " << unfinished_total << " unfinished flows at t=" << now;
      throw InvariantViolation(msg.str());
    }

    const double end = std::max(next, now);
    const double dt = end - now;
    const double tol_end = coalesce_tolerance(end);

    if (dt > 0.0) {
      result.feasibility_margin = std::min(result.feasibility_margin, margin);
      if (options.timeline != TimelineDetail::kNone) {
        TimelineSegment segment;
        segment.t_start = now;
        segment.t_end = end;
        segment.unfinished.reserve(unfinished_total);
        for (std::uint32_t f = 0; f < num_flows; ++f) {
          if (!finished[f]) segment.unfinished.push_back(f);
        }
        if (options.timeline == TimelineDetail::kFull) {
          segment.rates.reserve(active.size());
          for (auto f : active) segment.rates.push_back({f, rate[f]});
        }
        result.timeline.push_back(std::move(segment));
      }
    }

    for (auto f : active) {
      if (rate[f] <= 0.0) continue;
      const double completes_at = now + remaining[f] / rate[f];
      served[f] += rate[f] * dt;
      remaining[f] = std::max(0.0, remaining[f] - rate[f] * dt);
      if (completes_at <= end + tol_end || remaining[f] <= 0.0) {
        const auto& rec = result.flows[f];
        if (std::abs(served[f] - rec.demand) > 1e-9 * rec.demand) {
          std::ostringstream msg;
          msg << "flow " << describe(rec.key) << " completed with served volume " << served[f]
              << " != demand " << rec.demand;
          throw InvariantViolation(msg.str());
        }
        finished[f] = true;
        remaining[f] = 0.0;
        result.flows[f].completion = end;
        --unfinished_total;
      }
    }
    now = end;
  }

  for (const auto& rec : result.flows) {
    auto& t = result.coflow_completion[static_cast<Eigen::Index>(rec.coflow_index)];
    t = std::max(t, rec.completion);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < num_coflows; ++k) {
    total += instance.coflows[k].weight * result.coflow_completion[static_cast<Eigen::Index>(k)];
  }
  result.weighted_total = total;
  return result;
}

double weighted_completion_time(const SimulationResult& result, const Instance& instance) {
  if (result.coflow_ids.size() != instance.coflows.size()) {
    throw ValidationError("result and instance disagree on the number of coflows");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    if (result.coflow_ids[k] != instance.coflows[k].id) {
      throw ValidationError("result coflow id " + std::to_string(result.coflow_ids[k]) +
                            " does not match instance coflow id " +
                            std::to_string(instance.coflows[k].id));
    }
    total += instance.coflows[k].weight * result.coflow_completion[static_cast<Eigen::Index>(k)];
  }
  return total;
}

}  // namespace coflow
