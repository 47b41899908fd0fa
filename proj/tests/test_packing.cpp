#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covgame/instances.hpp"
#include "covgame/packing.hpp"
#include "covgame/rng.hpp"
#include "oracle.hpp"

using namespace covgame;

TEST_CASE("packing agent cost") {
  const CoveringInstance edge({0.4, 0.4}, {{{0, 1}, 1.0}});
  const PackingView view(edge);
  CHECK(packing_agent_cost(view, JointState::from_bits("11"), 0) == doctest::Approx(1.0));
  CHECK(packing_agent_cost(view, JointState::from_bits("00"), 0) == doctest::Approx(0.4));
  CHECK(packing_agent_cost(view, JointState::from_bits("10"), 0) == doctest::Approx(0.0));
  CHECK(packing_social_cost(view, JointState::from_bits("10")) == doctest::Approx(0.4));
}

TEST_CASE("relabel is an involution") {
  CHECK(relabel_state(JointState(4, Action::on)) == JointState(4));
  const auto s = JointState::from_bits("0110100");
  CHECK(relabel_state(relabel_state(s)) == s);
  CHECK(relabel_state(s).to_bits() == "1001011");
}

TEST_CASE("path of three") {
  const auto inst = gen_path(3, 0.5, 1.0);
  const auto eq = oracle::equilibria(inst);
  REQUIRE(eq.size() == 2);
  CHECK(eq[0].to_bits() == "010");
  CHECK(eq[1].to_bits() == "101");
  const PackingView view(inst);
  CHECK(is_packing_nash(view, JointState::from_bits("101")));
  CHECK(is_packing_nash(view, JointState::from_bits("010")));
  const auto rep = nash_correspondence_check(inst);
  CHECK(rep.matches());
  CHECK(rep.covering_equilibria == 2);
  CHECK(rep.all_size_two);
}

TEST_CASE("triangle") {
  const auto inst = gen_cycle(3, 0.5, 1.0);
  const auto eq = oracle::equilibria(inst);
  REQUIRE(eq.size() == 3);
  for (const auto& s : eq) CHECK(s.count_on() == 2);
  const auto rep = nash_correspondence_check(inst);
  CHECK(rep.matches());
  CHECK(rep.packing_equilibria == 3);
}

TEST_CASE("empty family: one equilibrium on each side") {
  const CoveringInstance inst({1.0, 2.0, 0.5}, {});
  const auto rep = nash_correspondence_check(inst);
  CHECK(rep.matches());
  // Off is free in the covering game, on is free in the packing game.
  CHECK(rep.covering_equilibria == 1);
  CHECK(rep.packing_equilibria == 1);
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(nash_correspondence_check(gen_path(23, 0.5, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(nash_correspondence_check(gen_path(10, 0.5, 1.0), 8), std::invalid_argument);
}

TEST_CASE("property: covering equilibria are minimal covers and relabel to maximal independent sets") {
  Rng rng(31);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 3 + rng.below(8);
    const std::size_t m = 1 + rng.below(std::min<std::uint64_t>(binomial_count(n, 2), 15));
    const auto inst = gen_random_uniform(n, m, 2, {0.3, 0.9}, {1.0, 1.0}, rng.next());
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
      const auto s = oracle::state_from_index(n, idx);
      // Agents that touch no set are off in every equilibrium, so compare on the covered part.
      bool isolated_on = false;
      for (AgentId i = 0; i < n; ++i) isolated_on = isolated_on || (inst.incident(i).empty() && s.is_on(i));
      const bool nash = is_nash(inst, s).is_nash;
      if (!isolated_on) CHECK(nash == is_minimal_cover(inst, s));
      if (nash) CHECK(is_maximal_independent(inst, relabel_state(s)));
    }
  }
}

TEST_CASE("property: the relabeling preserves every agent's cost, for any set size") {
  Rng rng(8);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 3 + rng.below(7);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 4));
    const std::size_t m = rng.below(std::min<std::uint64_t>(binomial_count(n, k), 12) + 1);
    const auto inst = gen_random_uniform(n, m, k, {0.2, 2.0}, {0.2, 2.0}, rng.next());
    const PackingView view(inst);
    for (int rep = 0; rep < 20; ++rep) {
      JointState s(n);
      for (AgentId i = 0; i < n; ++i) s[i] = rng.bernoulli(0.5) ? Action::on : Action::off;
      for (AgentId i = 0; i < n; ++i)
        CHECK(packing_agent_cost(view, s, i) == doctest::Approx(oracle::agent_cost(inst, relabel_state(s), i)));
    }
    CHECK(nash_correspondence_check(inst).matches());
  }
}
