#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>

#include "covgame/harness.hpp"
#include "covgame/instances.hpp"

using namespace covgame;

namespace {

std::vector<CoveringInstance> all_generators() {
  return {gen_star(9, 0.5, 1.0),
          gen_poa_bipartite(10, 2.0),
          gen_poa_bipartite(11, 1.5),
          gen_path(7, 0.3, 2.0),
          gen_cycle(6, 1.2, 0.7),
          gen_random_uniform(12, 20, 3, {0.5, 2.0}, {0.1, 1.0}, 42),
          gen_random_uniform(6, 15, 2, {1.0, 1.0}, {1.0, 1.0}, 1),
          gen_grid_sensor(4, 5, 1, 1.0, 1.0),
          gen_grid_sensor(3, 3, 0, 1.0, 1.0)};
}

}  // namespace

TEST_CASE("star") {
  const auto s = gen_star(4, 0.5, 1.0);
  CHECK(s.num_sets() == 3);
  CHECK(compute_stats(s).delta1 == 3);
  const auto opt = brute_force_opt(gen_star(10, 0.5, 1.0));
  CHECK(opt.cost == doctest::Approx(0.5));
  CHECK(opt.state.to_bits() == "1000000000");
  CHECK_THROWS(gen_star(1, 0.5, 1.0));
}

TEST_CASE("bipartite") {
  const auto inst = gen_poa_bipartite(10, 2.0);
  CHECK(inst.num_sets() == 16);
  JointState l_on(10), r_on(10);
  for (AgentId i = 0; i < 10; ++i) (i < 2 ? l_on : r_on)[i] = Action::on;
  CHECK(is_nash(inst, l_on).is_nash);
  CHECK(is_nash(inst, r_on).is_nash);
  CHECK(social_cost(inst, r_on) / social_cost(inst, l_on) == doctest::Approx((10.0 - 2.0) / 2.0));
  CHECK_THROWS(gen_poa_bipartite(2, 2.0));
}

TEST_CASE("random uniform") {
  const auto g = gen_random_uniform(10, 20, 2, {0.5, 1.0}, {1.0, 2.0}, 9);
  CHECK(g.num_sets() == 20);
  CHECK(compute_stats(g).delta2 == 1);
  for (double c : g.costs()) CHECK((c >= 0.5 && c <= 1.0));
  CHECK(serialize_instance(g) == serialize_instance(gen_random_uniform(10, 20, 2, {0.5, 1.0}, {1.0, 2.0}, 9)));
  CHECK(serialize_instance(g) != serialize_instance(gen_random_uniform(10, 20, 2, {0.5, 1.0}, {1.0, 2.0}, 10)));
  // Dense request: every pair.
  CHECK(gen_random_uniform(6, 15, 2, {1, 1}, {1, 1}, 3).num_sets() == 15);
  CHECK_THROWS(gen_random_uniform(6, 16, 2, {1, 1}, {1, 1}, 3));
  CHECK_THROWS(gen_random_uniform(6, 3, 7, {1, 1}, {1, 1}, 3));
}

TEST_CASE("random uniform at brute-force scale") {
  const auto inst = gen_random_uniform(18, 30, 3, {0.5, 2.0}, {0.5, 2.0}, 5);
  const auto t0 = std::chrono::steady_clock::now();
  const auto opt = brute_force_opt(inst);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(opt.cost > 0.0);
  CHECK(secs < 5.0);
}

TEST_CASE("grid sensor") {
  const auto g0 = gen_grid_sensor(3, 3, 0, 1.0, 1.0);
  for (const auto& s : g0.sets()) CHECK(s.members.size() == 1);
  const auto g1 = gen_grid_sensor(3, 3, 1, 1.0, 1.0);
  std::size_t largest = 0;
  for (const auto& s : g1.sets()) largest = std::max(largest, s.members.size());
  CHECK(largest == 9);
  CHECK(compute_stats(gen_grid_sensor(6, 6, 1, 1.0, 1.0)).f_max == 9);
  CHECK(compute_stats(gen_grid_sensor(2, 2, 3, 1.0, 1.0)).f_max == 4);
  // A 2x2 grid with radius 3: all four balls coincide and merge into one set of weight 4.
  const auto merged = gen_grid_sensor(2, 2, 3, 1.0, 1.0);
  REQUIRE(merged.num_sets() == 1);
  CHECK(merged.set(0).weight == doctest::Approx(4.0));
}

TEST_CASE("round trip") {
  for (const auto& inst : all_generators()) {
    const auto text = serialize_instance(inst);
    CHECK(parse_instance(text) == inst);
    CHECK(serialize_instance(parse_instance(text)) == text);
  }
  const auto s = JointState::from_bits("0110");
  CHECK(parse_state(serialize_state(s)) == s);
  CHECK(serialize_state(s) == "{\"actions\":\"0110\"}\n");
}

TEST_CASE("strict parsing") {
  const std::string dup = R"({"n":3,"costs":[1,1,1],"sets":[{"members":[0,1],"weight":1},{"members":[1,2],"weight":1},{"members":[1,0],"weight":2}]})";
  try {
    parse_instance(dup);
    FAIL("duplicate accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  const std::string extra = R"({"n":1,"costs":[1],"sets":[],"comment":"x"})";
  try {
    parse_instance(extra);
    FAIL("unknown field accepted");
  } catch (const ParseError& e) {
    CHECK(e.location() == "$.comment");
  }
  try {
    parse_instance(R"({"n":2,"costs":[1,1],"sets":[{"members":[0,1]}]})");
    FAIL("missing weight accepted");
  } catch (const ParseError& e) {
    CHECK(e.location() == "$.sets[0].weight");
  }
  try {
    parse_instance("{\"n\":2,\n\"costs\":[1,,1]}");
    FAIL("syntax error accepted");
  } catch (const ParseError& e) {
    CHECK(e.location().find("line 2") == 0);
  }
  CHECK_THROWS_AS(parse_instance(R"({"n":3,"costs":[1,1],"sets":[]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"n":2,"costs":[1,-1],"sets":[]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"n":2,"costs":[1,1],"sets":[{"members":[0,5],"weight":1}]})"), ParseError);
  CHECK_THROWS_AS(parse_state(R"({"actions":"01a"})"), ParseError);
  CHECK_THROWS_AS(parse_state(R"({"actions":"01","x":1})"), ParseError);
}

TEST_CASE("family names") {
  for (auto f : {Family::star, Family::poa_bipartite, Family::random_uniform, Family::grid_sensor, Family::path,
                 Family::cycle})
    CHECK(parse_family(to_string(f)) == f);
  CHECK_THROWS(parse_family("clique"));
  GeneratorSpec spec;
  spec.family = Family::path;
  spec.n = 5;
  CHECK(generate(spec) == gen_path(5, 0.5, 1.0));
}

TEST_CASE("binomial count") {
  CHECK(binomial_count(5, 2) == 10);
  CHECK(binomial_count(5, 6) == 0);
  CHECK(binomial_count(60, 30) == 118264581564861424ULL);
  CHECK(binomial_count(200, 100) == UINT64_MAX);
}
