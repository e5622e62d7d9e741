#include "coflow/bounds.hpp"

#include <algorithm>
#include <numeric>

namespace coflow {

namespace {

// Single machine, jobs given as (weight, processing time), all at time 0:
// Smith's rule (descending w/p) is optimal.
double smith_single_machine(std::vector<std::pair<double, double>> jobs) {
  std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) {
    return a.first * b.second > b.first * a.second;
  });
  double clock = 0.0;
  double total = 0.0;
  for (const auto& [w, len] : jobs) {
    clock += len;
    total += w * clock;
  }
  return total;
}

void require_zero_releases(const Instance& instance, const char* who) {
  for (const auto& coflow : instance.coflows) {
    if (coflow.release_time != 0.0) {
      throw ValidationError(std::string(who) + " needs all release times to be 0 (coflow " +
                            std::to_string(coflow.id) +
                            " is released later); use the dual certificate bound instead");
    }
  }
}

}  // namespace

double smith_port_lower_bound(const Instance& instance) {
  require_zero_releases(instance, "smith_port_lower_bound");
  const Eigen::MatrixXd in_loads = input_port_loads(instance);
  const Eigen::MatrixXd out_loads = output_port_loads(instance);
  const auto& sw = instance.switch_config;

  double best = 0.0;
  auto per_port = [&](const Eigen::MatrixXd& loads, const Vector& capacity) {
    for (Eigen::Index port = 0; port < loads.rows(); ++port) {
      std::vector<std::pair<double, double>> jobs;
      for (Eigen::Index k = 0; k < loads.cols(); ++k) {
        if (loads(port, k) > 0.0) {
          jobs.emplace_back(instance.coflows[static_cast<std::size_t>(k)].weight,
                            loads(port, k) / capacity[port]);
        }
      }
      best = std::max(best, smith_single_machine(std::move(jobs)));
    }
  };
  per_port(in_loads, sw.input_capacities);
  per_port(out_loads, sw.output_capacities);
  return best;
}

CosOptimum cos_brute_force_opt(const Instance& instance) {
  if (instance.kind != InstanceKind::kConcurrentOpenShop) {
    throw ValidationError("cos_brute_force_opt needs a concurrent-open-shop instance");
  }
  require_zero_releases(instance, "cos_brute_force_opt");
  if (instance.coflows.size() > kCosBruteForceLimit) {
    throw ValidationError("cos_brute_force_opt enumerates permutations of at most " +
                          std::to_string(kCosBruteForceLimit) + " coflows");
  }
  CosOptimum best;
  if (instance.coflows.empty()) return best;

  const Eigen::MatrixXd loads = input_port_loads(instance);  // diagonal: input == output
  const auto n = static_cast<Eigen::Index>(instance.coflows.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  best.value = std::numeric_limits<double>::infinity();
  Vector clock(loads.rows());
  do {
    clock.setZero();
    double total = 0.0;
    for (auto k : order) {
      clock += loads.col(k);
      double finish = 0.0;
      for (Eigen::Index port = 0; port < loads.rows(); ++port) {
        if (loads(port, k) > 0.0) finish = std::max(finish, clock[port]);
      }
      total += instance.coflows[static_cast<std::size_t>(k)].weight * finish;
    }
    if (total < best.value) {
      best.value = total;
      best.order.clear();
      for (auto k : order) best.order.push_back(instance.coflows[static_cast<std::size_t>(k)].id);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace coflow
