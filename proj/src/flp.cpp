#include "coflow/bounds.hpp"

#include <cmath>
#include <sstream>

#include "coflow/simplex.hpp"

namespace coflow {

namespace {

struct SlotLayout {
  std::vector<int> first_slot;                 // per coflow, 1-based
  std::vector<Eigen::Index> x_offset;          // per flow: column of its first usable slot
  std::vector<std::size_t> flow_coflow;        // per flow
  std::vector<const FlowSpec*> flow_spec;      // per flow
  std::vector<Eigen::Index> f_offset;          // per coflow
  Eigen::Index num_variables = 0;
};

SlotLayout lay_out(const Instance& instance, double slot, int horizon) {
  SlotLayout layout;
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    const auto& coflow = instance.coflows[k];
    const double slots_before = coflow.release_time / slot;
    const double rounded = std::round(slots_before);
    if (std::abs(slots_before - rounded) > 1e-9 * std::max(1.0, slots_before)) {
      std::ostringstream msg;
      msg << "coflow " << coflow.id << ": release time " << coflow.release_time
          << " is not a multiple of the slot length " << slot;
      throw ValidationError(msg.str());
    }
    const int first = static_cast<int>(rounded) + 1;
    if (first > horizon) {
      throw ValidationError("coflow " + std::to_string(coflow.id) +
                            " is released after the horizon; use a longer horizon");
    }
    layout.first_slot.push_back(first);
  }
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    const Eigen::Index usable = horizon - layout.first_slot[k] + 1;
    for (const auto& flow : instance.coflows[k].flows) {
      layout.x_offset.push_back(layout.num_variables);
      layout.flow_coflow.push_back(k);
      layout.flow_spec.push_back(&flow);
      layout.num_variables += usable;
    }
  }
  for (std::size_t k = 0; k < instance.coflows.size(); ++k) {
    layout.f_offset.push_back(layout.num_variables);
    layout.num_variables += horizon - layout.first_slot[k] + 1;
  }
  return layout;
}

}  // namespace

int sufficient_flp_horizon(const Instance& instance, double slot_length) {
  double last_release = 0.0;
  double volume = 0.0;
  for (const auto& coflow : instance.coflows) {
    last_release = std::max(last_release, coflow.release_time);
    for (const auto& flow : coflow.flows) volume += flow.demand;
  }
  const auto& sw = instance.switch_config;
  const double slowest = std::min(sw.input_capacities.minCoeff(), sw.output_capacities.minCoeff());
  return static_cast<int>(std::ceil(last_release / slot_length) +
                          std::ceil(volume / slowest / slot_length)) + 1;
}

FlpSolution solve_flp(const Instance& instance, double slot_length, int horizon_slots) {
  if (!(slot_length > 0.0) || !std::isfinite(slot_length)) {
    throw ValidationError("slot length must be positive");
  }
  if (horizon_slots < 1) throw ValidationError("horizon must be at least one slot");

  FlpSolution solution;
  solution.problem.slot_length = slot_length;
  solution.problem.horizon = horizon_slots;
  const auto num_coflows = static_cast<Eigen::Index>(instance.coflows.size());
  if (instance.coflows.empty()) {
    solution.rates = Eigen::MatrixXd::Zero(0, horizon_slots);
    solution.fractions = Eigen::MatrixXd::Zero(0, horizon_slots);
    return solution;
  }

  const SlotLayout layout = lay_out(instance, slot_length, horizon_slots);
  if (static_cast<std::size_t>(layout.num_variables) > kFlpVariableLimit) {
    throw ValidationError("fractional LP would have " + std::to_string(layout.num_variables) +
                          " variables (limit " + std::to_string(kFlpVariableLimit) +
                          "); use a smaller instance, coarser slots or a shorter horizon");
  }

  const auto& sw = instance.switch_config;
  const std::size_t num_flows = layout.flow_spec.size();
  Eigen::Index rows = num_coflows + horizon_slots * (sw.num_input_ports() + sw.num_output_ports());
  for (std::size_t f = 0; f < num_flows; ++f) {
    rows += horizon_slots - layout.first_slot[layout.flow_coflow[f]] + 1;
  }

  LinearProgram<double> lp;
  lp.constraints = Eigen::MatrixXd::Zero(rows, layout.num_variables);
  lp.rhs = Eigen::VectorXd::Zero(rows);
  lp.cost = Eigen::VectorXd::Zero(layout.num_variables);
  lp.sense.reserve(static_cast<std::size_t>(rows));
  Eigen::Index row = 0;

  for (Eigen::Index k = 0; k < num_coflows; ++k) {
    const auto& coflow = instance.coflows[static_cast<std::size_t>(k)];
    const int first = layout.first_slot[static_cast<std::size_t>(k)];
    for (int t = first; t <= horizon_slots; ++t) {
      lp.cost[layout.f_offset[static_cast<std::size_t>(k)] + (t - first)] =
          coflow.weight * t * slot_length;
    }
  }

  // Cumulative fraction of the coflow <= cumulative fraction of each flow.
  for (std::size_t f = 0; f < num_flows; ++f) {
    const std::size_t k = layout.flow_coflow[f];
    const int first = layout.first_slot[k];
    const double per_rate = slot_length / layout.flow_spec[f]->demand;
    for (int t = first; t <= horizon_slots; ++t) {
      for (int s = first; s <= t; ++s) {
        lp.constraints(row, layout.f_offset[k] + (s - first)) = 1.0;
        lp.constraints(row, layout.x_offset[f] + (s - first)) = -per_rate;
      }
      lp.sense.push_back(ConstraintSense::kLessEqual);
      ++row;
    }
  }

  for (Eigen::Index k = 0; k < num_coflows; ++k) {
    const int first = layout.first_slot[static_cast<std::size_t>(k)];
    for (int t = first; t <= horizon_slots; ++t) {
      lp.constraints(row, layout.f_offset[static_cast<std::size_t>(k)] + (t - first)) = 1.0;
    }
    lp.rhs[row] = 1.0;
    lp.sense.push_back(ConstraintSense::kGreaterEqual);
    ++row;
  }

  for (int t = 1; t <= horizon_slots; ++t) {
    const Eigen::Index in_row = row;
    const Eigen::Index out_row = row + sw.num_input_ports();
    for (std::size_t f = 0; f < num_flows; ++f) {
      const int first = layout.first_slot[layout.flow_coflow[f]];
      if (t < first) continue;
      const Eigen::Index col = layout.x_offset[f] + (t - first);
      lp.constraints(in_row + layout.flow_spec[f]->input_port, col) = 1.0;
      lp.constraints(out_row + layout.flow_spec[f]->output_port, col) = 1.0;
    }
    lp.rhs.segment(in_row, sw.num_input_ports()) = sw.input_capacities;
    lp.rhs.segment(out_row, sw.num_output_ports()) = sw.output_capacities;
    for (Eigen::Index i = 0; i < sw.num_input_ports() + sw.num_output_ports(); ++i) {
      lp.sense.push_back(ConstraintSense::kLessEqual);
    }
    row += sw.num_input_ports() + sw.num_output_ports();
  }

  solution.problem.num_variables = static_cast<std::size_t>(layout.num_variables);
  solution.problem.num_constraints = static_cast<std::size_t>(rows);

  const LpSolution<double> lp_solution = solve_lp(lp);
  solution.pivots = lp_solution.pivots;
  switch (lp_solution.status) {
    case LpStatus::kOptimal:
      break;
    case LpStatus::kInfeasible:
      throw ValidationError("fractional LP is infeasible with horizon " + std::to_string(horizon_slots) +
                            " slots; use a longer horizon (e.g. " +
                            std::to_string(sufficient_flp_horizon(instance, slot_length)) + ")");
    case LpStatus::kUnbounded:
      throw InvariantViolation("fractional LP reported unbounded; its objective is bounded below by 0");
    case LpStatus::kIterationLimit:
      throw InvariantViolation("fractional LP hit the simplex pivot cap");
  }

  solution.optimum = lp_solution.objective;
  solution.rates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_flows), horizon_slots);
  solution.fractions = Eigen::MatrixXd::Zero(num_coflows, horizon_slots);
  for (std::size_t f = 0; f < num_flows; ++f) {
    const int first = layout.first_slot[layout.flow_coflow[f]];
    for (int t = first; t <= horizon_slots; ++t) {
      solution.rates(static_cast<Eigen::Index>(f), t - 1) = lp_solution.x[layout.x_offset[f] + (t - first)];
    }
  }
  for (Eigen::Index k = 0; k < num_coflows; ++k) {
    const int first = layout.first_slot[static_cast<std::size_t>(k)];
    for (int t = first; t <= horizon_slots; ++t) {
      solution.fractions(k, t - 1) = lp_solution.x[layout.f_offset[static_cast<std::size_t>(k)] + (t - first)];
    }
  }
  return solution;
}

}  // namespace coflow
