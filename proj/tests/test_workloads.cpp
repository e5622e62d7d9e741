#include <doctest.h>

#include <set>
#include <sstream>

#include "coflow/instance_io.hpp"
#include "coflow/random.hpp"
#include "coflow/workloads.hpp"

using namespace coflow;

namespace {

Instance trace_of(const std::string& text, TraceOptions options = {}) {
  std::istringstream in(text);
  return parse_trace(in, options, "test");
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  // Reference SplitMix64 stream for seed 1234567.
  SplitMix64 rng(1234567);
  CHECK(rng() == 6457827717110365317ULL);
  CHECK(rng() == 3203168211198807973ULL);
  CHECK(rng() == 9817491932198370423ULL);
}

TEST_CASE("uniform draws stay in range") {
  SplitMix64 rng(9);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(3, 7);
    CHECK(v >= 3);
    CHECK(v <= 7);
    seen.insert(v);
    const double x = rng.uniform_real(0.0, 50.0);
    CHECK(x >= 0.0);
    CHECK(x <= 50.0);
  }
  CHECK(seen.size() == 5);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("n=20 m=15 D=15 T=50 configuration is accepted") {
  SyntheticParams params;
  params.n = 20;
  params.m = 15;
  params.max_demand = 15;
  params.last_release = 50.0;
  for (int p : {20, 60, 100, 140}) {
    params.p_max = p;
    CHECK_NOTHROW(params.validate());
    const Instance inst = generate_synthetic(params);
    CHECK(inst.coflows.size() == 20);
    CHECK(inst.switch_config.num_input_ports() == 15);
  }
}

TEST_CASE("p_max = 1 gives single-flow coflows") {
  SyntheticParams params;
  params.p_max = 1;
  for (const auto& c : generate_synthetic(params).coflows) CHECK(c.flows.size() == 1);
}

TEST_CASE("generator properties over many seeds") {
  SyntheticParams params;
  params.n = 10;
  params.m = 6;
  params.p_max = 30;
  params.max_demand = 15;
  params.last_release = 50.0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    params.seed = seed;
    const Instance inst = generate_synthetic(params);
    CHECK_NOTHROW(validate_instance(inst));
    CHECK(compute_p(inst) <= params.p_max);
    for (const auto& c : inst.coflows) {
      CHECK(c.release_time >= 0.0);
      CHECK(c.release_time <= 50.0);
      CHECK(c.weight == 1.0);
      for (const auto& f : c.flows) {
        CHECK(f.demand >= 1.0);
        CHECK(f.demand <= 15.0);
        CHECK(f.demand == std::floor(f.demand));
      }
    }
  }
}

TEST_CASE("generation is a pure function of the parameters") {
  SyntheticParams params;
  params.seed = 77;
  params.weights = WeightRange{1, 9};
  CHECK(generate_synthetic(params) == generate_synthetic(params));
  params.seed = 78;
  const Instance other = generate_synthetic(params);
  params.seed = 77;
  CHECK_FALSE(generate_synthetic(params) == other);
  const Instance inst = generate_synthetic(params);
  CHECK(inst.metadata.at("prng") == "splitmix64");
  CHECK(inst.metadata.at("seed") == "77");
}

TEST_CASE("generator guards") {
  SyntheticParams params;
  params.p_max = 15 * 15 + 1;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = {};
  params.n = 0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = {};
  params.max_demand = 0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = {};
  params.last_release = -1;
  CHECK_THROWS_AS(params.validate(), ValidationError);
}

TEST_CASE("weight spec") {
  const auto w = parse_weight_spec("uniform:2,5");
  CHECK(w.lo == 2);
  CHECK(w.hi == 5);
  CHECK_THROWS_AS(parse_weight_spec("uniform:5,2"), ValidationError);
  CHECK_THROWS_AS(parse_weight_spec("normal:1,2"), ValidationError);
  CHECK_THROWS_AS(parse_weight_spec("uniform:0,2"), ValidationError);
}

TEST_CASE("trace: one mapper, one reducer") {
  const Instance inst = trace_of("2 1\n7 0 1 0 1 1:4\n");
  REQUIRE(inst.coflows.size() == 1);
  CHECK(inst.coflows[0].id == 7);
  REQUIRE(inst.coflows[0].flows.size() == 1);
  CHECK(inst.coflows[0].flows[0] == FlowSpec{0, 1, 4.0});
}

TEST_CASE("trace: even split across mappers") {
  const Instance inst = trace_of("4 1\n1 250 3 0 1 2 1 3:6\n");
  const auto& c = inst.coflows[0];
  CHECK(c.release_time == doctest::Approx(0.25));
  REQUIRE(c.flows.size() == 3);
  for (const auto& f : c.flows) {
    CHECK(f.output_port == 3);
    CHECK(f.demand == doctest::Approx(2.0));
  }
}

TEST_CASE("trace: truncation keeps file order") {
  std::ostringstream text;
  text << "3 526\n";
  for (int k = 1; k <= 526; ++k) text << k << ' ' << k * 10 << " 1 " << k % 3 << " 1 " << (k + 1) % 3 << ":1.5\n";
  TraceOptions options;
  options.first = 100;
  const Instance inst = trace_of(text.str(), options);
  REQUIRE(inst.coflows.size() == 100);
  for (int k = 0; k < 100; ++k) CHECK(inst.coflows[static_cast<std::size_t>(k)].id == k + 1);
  CHECK(trace_of(text.str()).coflows.size() == 526);
}

TEST_CASE("trace: volume is conserved and capacity applied") {
  TraceOptions options;
  options.capacity_mbps = 2.5;
  const Instance inst = trace_of("4 2\n1 0 2 0 1 2 2:6 3:4\n2 100 3 1 2 3 1 0:7\n", options);
  double total = 0.0;
  for (const auto& c : inst.coflows) {
    for (const auto& f : c.flows) total += f.demand;
  }
  CHECK(total == doctest::Approx(17.0).epsilon(1e-6));
  CHECK(inst.switch_config.input_capacities[0] == 2.5);
  CHECK(inst.switch_config.output_capacities[3] == 2.5);
}

TEST_CASE("trace: errors name the line") {
  auto message = [](const std::string& text) -> std::string {
    try {
      trace_of(text);
    } catch (const ValidationError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("2 1\n1 0 1 5 1 1:4\n").find("test:2") != std::string::npos);
  CHECK(message("2 1\n1 0 1 0 1 1:-4\n").find("test:2") != std::string::npos);
  CHECK(message("2 2\n1 0 1 0 1 1:4\n") != "");
  CHECK(message("2 1\n1 0 1 0 1 1:4\n2 0 1 0 1 1:4\n") != "");
  CHECK(message("garbage\n") != "");
  CHECK(message("2 1\n1 0 1 0 1 1:4 extra\n") != "");
}
