#include "coflow/workloads.hpp"

#include <numeric>
#include <vector>

#include "coflow/random.hpp"

namespace coflow {

void SyntheticParams::validate() const {
  if (n < 1) throw ValidationError("synthetic: n must be at least 1");
  if (m < 1) throw ValidationError("synthetic: m must be at least 1");
  if (p_max < 1 || static_cast<long long>(p_max) > static_cast<long long>(m) * m) {
    throw ValidationError("synthetic: p_max must lie in [1, m*m]");
  }
  if (max_demand < 1) throw ValidationError("synthetic: max demand D must be at least 1");
  if (!(last_release >= 0.0)) throw ValidationError("synthetic: last release T must be >= 0");
  if (weights && (weights->lo < 1 || weights->hi < weights->lo)) {
    throw ValidationError("synthetic: weight range must satisfy 1 <= a <= b");
  }
}

Instance generate_synthetic(const SyntheticParams& params) {
  params.validate();
  Instance instance;
  instance.switch_config = SwitchConfig::uniform(params.m, 1.0);
  instance.kind = InstanceKind::kGeneral;
  instance.metadata = {{"generator", "synthetic"},
                       {"prng", SplitMix64::kAlgorithm},
                       {"seed", std::to_string(params.seed)},
                       {"n", std::to_string(params.n)},
                       {"m", std::to_string(params.m)},
                       {"p_max", std::to_string(params.p_max)},
                       {"D", std::to_string(params.max_demand)},
                       {"weights", params.weights ? "uniform:" + std::to_string(params.weights->lo) +
                                                        "," + std::to_string(params.weights->hi)
                                                  : "unit"}};

  const int pairs = params.m * params.m;
  std::vector<int> slots(static_cast<std::size_t>(pairs));
  for (int k = 0; k < params.n; ++k) {
    // One independent stream per coflow.
    SplitMix64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(k)));
    CoflowSpec coflow;
    coflow.id = k + 1;
    const auto count = static_cast<int>(rng.uniform_int(1, params.p_max));

    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    std::iota(slots.begin(), slots.end(), 0);
    for (int f = 0; f < count; ++f) {
      const auto pick = static_cast<std::size_t>(rng.uniform_int(f, pairs - 1));
      std::swap(slots[static_cast<std::size_t>(f)], slots[pick]);
      const int pair = slots[static_cast<std::size_t>(f)];
      coflow.flows.push_back({pair / params.m, pair % params.m,
                              static_cast<double>(rng.uniform_int(1, params.max_demand))});
    }
    coflow.release_time = rng.uniform_real(0.0, params.last_release);
    coflow.weight = params.weights
                        ? static_cast<double>(rng.uniform_int(params.weights->lo, params.weights->hi))
                        : 1.0;
    instance.coflows.push_back(std::move(coflow));
  }
  return validate_instance(std::move(instance));
}

WeightRange parse_weight_spec(const std::string& spec) {
  const std::string prefix = "uniform:";
  if (spec.rfind(prefix, 0) != 0) {
    throw ValidationError("weights must look like uniform:a,b, got '" + spec + "'");
  }
  const std::string body = spec.substr(prefix.size());
  const auto comma = body.find(',');
  if (comma == std::string::npos) {
    throw ValidationError("weights must look like uniform:a,b, got '" + spec + "'");
  }
  WeightRange range;
  try {
    std::size_t used = 0;
    range.lo = std::stoi(body.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing");
    const std::string hi = body.substr(comma + 1);
    range.hi = std::stoi(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("weights must look like uniform:a,b with integers a <= b, got '" + spec + "'");
  }
  if (range.lo < 1 || range.hi < range.lo) {
    throw ValidationError("weights must satisfy 1 <= a <= b, got '" + spec + "'");
  }
  return range;
}

}  // namespace coflow
