#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "coflow/engine.hpp"
#include "coflow/schedulers.hpp"
#include "support.hpp"

using namespace coflow;
using namespace coflow::testing;

namespace {

// Independent oracle: replays BlindFlow by recomputing the rates at each
// completion, with nothing shared with the engine except the instance.
std::map<int, double> blindflow_by_hand(const Instance& inst) {
  struct Open {
    int coflow;
    int in;
    int out;
    double left;
    double weight;
    double release;
  };
  std::vector<Open> open;
  for (const auto& c : inst.coflows) {
    for (const auto& f : c.flows) open.push_back({c.id, f.input_port, f.output_port, f.demand, c.weight, c.release_time});
  }
  std::map<int, double> done;
  double t = 0.0;
  while (!open.empty()) {
    std::map<int, double> win, wout;
    double next_release = INFINITY;
    for (const auto& f : open) {
      if (f.release <= t) {
        win[f.in] += f.weight;
        wout[f.out] += f.weight;
      } else {
        next_release = std::min(next_release, f.release);
      }
    }
    std::vector<double> rate(open.size(), 0.0);
    double dt = next_release - t;
    for (std::size_t x = 0; x < open.size(); ++x) {
      const auto& f = open[x];
      if (f.release > t) continue;
      rate[x] = f.weight / (wout[f.out] / inst.switch_config.output_capacities[f.out] +
                            win[f.in] / inst.switch_config.input_capacities[f.in]);
      dt = std::min(dt, f.left / rate[x]);
    }
    t += dt;
    std::vector<Open> still;
    for (std::size_t x = 0; x < open.size(); ++x) {
      open[x].left -= rate[x] * dt;
      if (open[x].left > 1e-12 * std::max(1.0, open[x].left + rate[x] * dt)) still.push_back(open[x]);
    }
    open = still;
    for (const auto& c : inst.coflows) {
      bool any = false;
      for (const auto& f : open) any = any || f.coflow == c.id;
      if (!any && !done.count(c.id)) done[c.id] = t;
    }
  }
  return done;
}

class FixedRate : public Scheduler {
 public:
  explicit FixedRate(double r) : r_(r) {}
  std::string name() const override { return "fixed"; }
  RateAllocation allocate(const SchedulerView& view) override {
    RateAllocation a;
    for (const auto& f : view.active_flows) a.set(f.key, r_);
    return a;
  }

 private:
  double r_;
};

class Lazy : public Scheduler {
 public:
  std::string name() const override { return "lazy"; }
  RateAllocation allocate(const SchedulerView& view) override {
    RateAllocation a;
    for (const auto& f : view.active_flows) a.set(f.key, 0.0);
    return a;
  }
};

class Impostor : public Scheduler {
 public:
  std::string name() const override { return "impostor"; }
  RateAllocation allocate(const SchedulerView&) override {
    RateAllocation a;
    a.set({99, 0, 0}, 1.0);
    return a;
  }
};

}  // namespace

TEST_CASE("single flow under blindflow finishes at 2") {
  const auto result = run_algorithm(single_flow(), "blindflow");
  CHECK(result.coflow_completion[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(result.weighted_total == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(result.timeline.size() == 1);
  REQUIRE(result.timeline[0].rates.size() == 1);
  CHECK(result.timeline[0].rates[0].rate == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("2x2 example matches hand integration") {
  const Instance inst = example_2x2();
  const auto result = run_algorithm(inst, "blindflow");
  // Exact rational replay gives T_1 = T_2 = 157/18, J = 157/6.
  CHECK(result.coflow_completion[0] == doctest::Approx(157.0 / 18.0).epsilon(1e-12));
  CHECK(result.coflow_completion[1] == doctest::Approx(157.0 / 18.0).epsilon(1e-12));
  CHECK(weighted_completion_time(result, inst) == doctest::Approx(157.0 / 6.0).epsilon(1e-12));

  // Initial segment carries the rates of the formula at t = 0.
  const auto& first = result.timeline.front();
  std::map<FlowKey, double> r;
  for (const auto& sr : first.rates) r[result.flows[sr.flow].key] = sr.rate;
  CHECK(r[{1, 0, 0}] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(r[{1, 1, 0}] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(r[{2, 0, 0}] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(r[{2, 0, 1}] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(r[{2, 1, 1}] == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("engine agrees with the replay oracle on random instances with releases") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = random_tiny_general(seed, 5, 3, 6, 4);
    const auto oracle = blindflow_by_hand(inst);
    const auto result = run_algorithm(inst, "blindflow", TimelineDetail::kNone);
    for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
      CHECK(result.coflow_completion[static_cast<Eigen::Index>(k)] ==
            doctest::Approx(oracle.at(inst.coflows[k].id)).epsilon(1e-9));
    }
  }
}

TEST_CASE("empty instance") {
  const auto result = run_algorithm(empty_instance(), "blindflow");
  CHECK(result.weighted_total == 0.0);
  CHECK(result.timeline.empty());
  CHECK(result.makespan() == 0.0);
}

TEST_CASE("weighted_completion_time arithmetic") {
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(1);
  inst.coflows = {{1, 1.0, 0.0, {{0, 0, 1.0}}}, {2, 2.0, 0.0, {{0, 0, 1.0}}}};
  SimulationResult r;
  r.coflow_ids = {1, 2};
  r.coflow_completion = Vector(2);
  r.coflow_completion << 3.0, 4.0;
  CHECK(weighted_completion_time(r, inst) == 11.0);

  r.coflow_ids = {1, 3};
  CHECK_THROWS(weighted_completion_time(r, inst));
}

TEST_CASE("conservation and timeline shape") {
  const Instance inst = random_tiny_general(11, 5, 3, 6, 4);
  const auto result = run_algorithm(inst, "blindflow");
  std::map<std::uint32_t, double> served;
  double prev_end = 0.0;
  for (const auto& seg : result.timeline) {
    CHECK(seg.t_end > seg.t_start);
    CHECK(seg.t_start == doctest::Approx(prev_end));
    prev_end = seg.t_end;
    for (const auto& r : seg.rates) served[r.flow] += r.rate * (seg.t_end - seg.t_start);
  }
  for (std::uint32_t f = 0; f < result.flows.size(); ++f) {
    CHECK(served[f] == doctest::Approx(result.flows[f].demand).epsilon(1e-9));
    CHECK(result.flows[f].completion <= result.coflow_completion[static_cast<Eigen::Index>(result.flows[f].coflow_index)]);
  }
  CHECK(result.makespan() == doctest::Approx(prev_end));
}

TEST_CASE("no flow is served before its release") {
  const Instance inst = random_tiny_general(5, 5, 3, 6, 4);
  const auto result = run_algorithm(inst, "blindflow");
  for (const auto& seg : result.timeline) {
    for (const auto& r : seg.rates) {
      const auto& rec = result.flows[r.flow];
      if (r.rate > 0.0) CHECK(seg.t_start >= inst.coflows[rec.coflow_index].release_time);
    }
  }
}

TEST_CASE("causal runs reject over-capacity allocations") {
  Instance inst;
  inst.switch_config = SwitchConfig::uniform(1);
  inst.coflows = {{1, 1.0, 0.0, {{0, 0, 1.0}}}, {2, 1.0, 0.0, {{0, 0, 1.0}}}};
  FixedRate greedy(1.0);
  CHECK_THROWS_AS(simulate(inst, greedy), InvariantViolation);

  FixedRate fair(0.5);
  const auto ok = simulate(inst, fair);
  CHECK(ok.weighted_total == doctest::Approx(4.0));
  CHECK(ok.feasibility_margin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("starvation and unknown keys are invariant violations") {
  Lazy lazy;
  CHECK_THROWS_AS(simulate(single_flow(), lazy), InvariantViolation);
  Impostor impostor;
  CHECK_THROWS_AS(simulate(single_flow(), impostor), InvariantViolation);
}

TEST_CASE("indicator timeline omits rates") {
  const auto result = run_algorithm(example_2x2(), "blindflow", TimelineDetail::kIndicators);
  REQUIRE_FALSE(result.timeline.empty());
  for (const auto& seg : result.timeline) {
    CHECK(seg.rates.empty());
    CHECK_FALSE(seg.unfinished.empty());
  }
  CHECK(run_algorithm(example_2x2(), "blindflow", TimelineDetail::kNone).timeline.empty());
}

TEST_CASE("result json") {
  const auto result = run_algorithm(example_2x2(), "blindflow");
  const auto doc = result_to_json(result, true);
  CHECK(doc["algorithm"] == "blindflow");
  CHECK(doc["coflows"].size() == 2);
  CHECK(doc["flows"].size() == 5);
  CHECK(doc["timeline"].size() == result.timeline.size());
  CHECK_FALSE(result_to_json(result, false).contains("timeline"));
}
