#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "coflow/bounds.hpp"
#include "coflow/schedulers.hpp"
#include "coflow/workloads.hpp"
#include "support.hpp"

using namespace coflow;
using namespace coflow::testing;

TEST_CASE("certificate on a single flow") {
  const Instance inst = single_flow();
  DualCertificate cert = certify_instance(inst);
  CHECK(cert.p == 1);
  CHECK(cert.j_aug == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cert.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(cert.segments.size() == 1);
  // theta = phi = 1/4 over [0, 1/2).
  CHECK(cert.segments[0].theta[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cert.segments[0].phi[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cert.objective == doctest::Approx(0.25).epsilon(1e-12));
  REQUIRE(cert.feasibility.has_value());
  CHECK(cert.feasibility->feasible);
  CHECK(cert.feasibility->worst_slack_alpha >= 0.0);
  CHECK(cert.feasibility->worst_slack_gamma >= 0.0);
  CHECK(dual_objective_lower_bound(cert) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("certificate on the empty instance") {
  const DualCertificate cert = certify_instance(empty_instance());
  CHECK(cert.objective == 0.0);
  CHECK(cert.feasibility->feasible);
  CHECK(dual_objective_lower_bound(cert) == 0.0);
}

TEST_CASE("unchecked certificate is not a bound") {
  const Instance inst = example_2x2();
  const auto aug = run_algorithm(inst, "augmented", TimelineDetail::kIndicators);
  DualCertificate cert = build_dual_certificate(aug, inst, 3);
  CHECK_THROWS_AS(dual_objective_lower_bound(cert), InvariantViolation);
  check_dual_feasibility(cert, inst);
  CHECK_NOTHROW(dual_objective_lower_bound(cert));
}

TEST_CASE("certificate builder guards its input") {
  const Instance inst = example_2x2();
  const auto bf = run_algorithm(inst, "blindflow");
  CHECK_THROWS(build_dual_certificate(bf, inst, 3));
  const auto bare = run_algorithm(inst, "augmented", TimelineDetail::kNone);
  CHECK_THROWS(build_dual_certificate(bare, inst, 3));
}

TEST_CASE("gamma accessor follows the indicator set") {
  const Instance inst = example_2x2();
  const DualCertificate cert = certify_instance(inst);
  // First segment: all five flows open; coflow 1 has two flows, coflow 2 three.
  CHECK(cert.gamma(0, 0) == doctest::Approx(0.5));
  CHECK(cert.gamma(0, 2) == doctest::Approx(2.0 / 3.0));
  const std::size_t last = cert.segments.size() - 1;
  double open = 0.0;
  for (std::uint32_t f = 0; f < cert.flows.size(); ++f) open += cert.gamma(last, f) > 0.0 ? 1.0 : 0.0;
  CHECK(open == static_cast<double>(cert.segments[last].unfinished.size()));
}

TEST_CASE("certificate objective is half the augmented cost and is feasible") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    SyntheticParams params;
    params.n = 6;
    params.m = 4;
    params.p_max = 8;
    params.max_demand = 9;
    params.last_release = 6.0;
    params.seed = seed;
    if (seed % 3 == 0) params.weights = WeightRange{1, 4};
    const Instance inst = generate_synthetic(params);
    const DualCertificate cert = certify_instance(inst);
    CHECK(cert.feasibility->feasible);
    CHECK(std::abs(cert.objective - cert.j_aug / 2.0) <= 1e-9 * cert.j_aug);
  }
}

TEST_CASE("report json") {
  const auto doc = certificate_report_json(certify_instance(example_2x2()));
  CHECK(doc["feasible"] == true);
  CHECK(doc["objective"].get<double>() == doctest::Approx(doc["j_aug"].get<double>() / 2.0));
  CHECK(doc["violations"].empty());
}

TEST_CASE("flp on a single flow") {
  const FlpSolution sol = solve_flp(single_flow(), 1.0, 2);
  CHECK(sol.optimum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.fractions(0, 0) == doctest::Approx(1.0));
  CHECK(sol.rates(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("flp edge cases") {
  CHECK(solve_flp(empty_instance(), 1.0, 1).optimum == 0.0);
  // Demand 3 cannot fit in 2 unit slots.
  CHECK_THROWS_AS(solve_flp(single_flow(1.0, 3.0), 1.0, 2), ValidationError);
  // Release off the slot grid.
  CHECK_THROWS_AS(solve_flp(single_flow(1.0, 1.0, 0.5), 1.0, 4), ValidationError);
  CHECK_THROWS_AS(solve_flp(example_2x2(), 1.0, 100000), ValidationError);
  // A release delays the first usable slot: served in slot 3, finishing at 3.
  CHECK(solve_flp(single_flow(1.0, 1.0, 2.0), 1.0, 4).optimum == doctest::Approx(3.0));
  CHECK(sufficient_flp_horizon(example_2x2(), 1.0) >= 5);
}

TEST_CASE("flp solution respects its constraints") {
  const Instance inst = example_2x2();
  const FlpSolution sol = solve_flp(inst, 1.0, sufficient_flp_horizon(inst, 1.0));
  const auto h = sol.problem.horizon;
  for (Eigen::Index k = 0; k < sol.fractions.rows(); ++k) CHECK(sol.fractions.row(k).sum() >= 1.0 - 1e-7);
  for (int t = 0; t < h; ++t) {
    Vector in = Vector::Zero(2), out = Vector::Zero(2);
    std::size_t f = 0;
    for (const auto& c : inst.coflows) {
      for (const auto& flow : c.flows) {
        in[flow.input_port] += sol.rates(static_cast<Eigen::Index>(f), t);
        out[flow.output_port] += sol.rates(static_cast<Eigen::Index>(f), t);
        ++f;
      }
    }
    CHECK(in.maxCoeff() <= 1.0 + 1e-7);
    CHECK(out.maxCoeff() <= 1.0 + 1e-7);
  }
  // Sits between the dual bound and the BlindFlow cost.
  const double dual = dual_objective_lower_bound(certify_instance(inst));
  CHECK(sol.optimum >= dual - 1e-6);
  CHECK(sol.optimum <= run_algorithm(inst, "blindflow").weighted_total);
}

TEST_CASE("smith per-port bound") {
  Instance one;
  one.switch_config = SwitchConfig::uniform(2);
  one.coflows = {{1, 2.0, 0.0, {{0, 0, 5.0}}}};
  CHECK(smith_port_lower_bound(validate_instance(one)) == doctest::Approx(10.0));

  Instance two;
  two.switch_config = SwitchConfig::uniform(1);
  two.coflows = {{1, 1.0, 0.0, {{0, 0, 1.0}}}, {2, 1.0, 0.0, {{0, 0, 2.0}}}};
  CHECK(smith_port_lower_bound(validate_instance(two)) == doctest::Approx(4.0));

  CHECK(smith_port_lower_bound(empty_instance()) == 0.0);
  CHECK_THROWS_AS(smith_port_lower_bound(single_flow(1.0, 1.0, 1.0)), ValidationError);
}

TEST_CASE("cos brute force") {
  Instance inst;
  inst.kind = InstanceKind::kConcurrentOpenShop;
  inst.switch_config = SwitchConfig::uniform(2);

  inst.coflows = {{1, 1.0, 0.0, {{0, 0, 3.0}}}};
  CHECK(cos_brute_force_opt(validate_instance(inst)).value == doctest::Approx(3.0));

  inst.coflows = {{1, 1.0, 0.0, {{0, 0, 2.0}}}, {2, 1.0, 0.0, {{0, 0, 1.0}}}};
  const CosOptimum opt = cos_brute_force_opt(validate_instance(inst));
  CHECK(opt.value == doctest::Approx(4.0));
  CHECK(opt.order == std::vector<int>{2, 1});

  inst.coflows = {{1, 1.0, 0.0, {{0, 0, 2.0}}}, {2, 1.0, 0.0, {{1, 1, 3.0}}}};
  CHECK(cos_brute_force_opt(validate_instance(inst)).value == doctest::Approx(5.0));

  CHECK_THROWS_AS(cos_brute_force_opt(example_2x2()), ValidationError);
}

TEST_CASE("bounds never exceed the brute-force optimum on small open shops") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = random_cos(seed, 6, 3, 5);
    const double opt = cos_brute_force_opt(inst).value;
    CHECK(dual_objective_lower_bound(certify_instance(inst)) <= opt * (1.0 + 1e-9));
    CHECK(smith_port_lower_bound(inst) <= opt * (1.0 + 1e-9));
    // Smith's order on one port is the whole story when there is only one port.
    if (inst.switch_config.num_input_ports() == 1) {
      CHECK(smith_port_lower_bound(inst) == doctest::Approx(opt));
    }
  }
}
