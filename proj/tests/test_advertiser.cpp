#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "covgame/advertiser.hpp"
#include "covgame/harness.hpp"
#include "covgame/instances.hpp"
#include "covgame/rng.hpp"
#include "oracle.hpp"

using namespace covgame;

namespace {

// LP optimum by enumerating basic solutions: every choice of n linearly
// independent tight constraints among {A x >= 1, x >= 0, x <= 1}.
double vertex_enumeration_lp(const CoveringInstance& inst) {
  const std::size_t n = inst.num_agents(), m = inst.num_sets();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& s : inst.sets()) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (auto j : s.members) r[j] = 1.0;
    rows.push_back(r);
    rhs.push_back(1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r[i] = 1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
    rows.push_back(r);
    rhs.push_back(1.0);
  }
  Eigen::VectorXd c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = inst.cost(i);

  const std::size_t total = rows.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n);
  for (std::size_t k = 0; k < n; ++k) pick[k] = k;
  for (;;) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t k = 0; k < n; ++k) {
      A.row(static_cast<Eigen::Index>(k)) = rows[pick[k]].transpose();
      b[static_cast<Eigen::Index>(k)] = rhs[pick[k]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() == static_cast<Eigen::Index>(n)) {
      const Eigen::VectorXd x = lu.solve(b);
      bool feasible = true;
      for (std::size_t i = 0; i < n && feasible; ++i) feasible = x[i] >= -1e-9 && x[i] <= 1 + 1e-9;
      for (std::size_t k = 0; k < m && feasible; ++k) feasible = rows[k].dot(x) >= 1 - 1e-9;
      if (feasible) best = std::min(best, c.dot(x));
    }
    std::size_t pos = n;
    while (pos > 0 && pick[pos - 1] == total - n + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t k = pos; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

JointState center_on(std::size_t n) {
  JointState s(n);
  s[0] = Action::on;
  return s;
}

}  // namespace

TEST_CASE("lp on a small star") {
  const auto inst = gen_star(4, 0.5, 1.0);
  const auto lp = solve_lp_relaxation(inst);
  REQUIRE(lp.status == LpStatus::optimal);
  CHECK(lp.objective == doctest::Approx(0.5));
  CHECK(lp.x[0] == doctest::Approx(1.0));
  for (AgentId i = 1; i < 4; ++i) CHECK(lp.x[i] == doctest::Approx(0.0));
  CHECK(vertex_enumeration_lp(inst) == doctest::Approx(0.5));
  const auto ad = round_lp(inst, lp);
  CHECK(ad.state == center_on(4));
  CHECK(ad.provenance == Provenance::lp_rounding);
}

TEST_CASE("lp on a single set and on an empty family") {
  const CoveringInstance one({1.0, 3.0}, {{{0, 1}, 1.0}});
  const auto lp = solve_lp_relaxation(one);
  CHECK(lp.objective == doctest::Approx(1.0));
  CHECK(lp.x[0] == doctest::Approx(1.0));
  CHECK(lp.x[1] == doctest::Approx(0.0));

  const CoveringInstance none({1.0, 2.0, 3.0}, {});
  const auto lp0 = solve_lp_relaxation(none);
  CHECK(lp0.objective == 0.0);
  for (double x : lp0.x) CHECK(x == 0.0);
  CHECK(round_lp(none, lp0).state.count_on() == 0);
}

TEST_CASE("uniform fractional solution rounds to all on") {
  const auto inst = gen_cycle(5, 1.0, 1.0);
  LpSolution lp;
  lp.x.assign(5, 0.5);
  CHECK(round_lp(inst, lp).state.count_on() == 5);
  lp.status = LpStatus::iteration_cap;
  CHECK_THROWS(round_lp(inst, lp));
}

TEST_CASE("repair rule") {
  const auto star = gen_star(5, 0.5, 1.0);
  CHECK(repair_to_full_cover(star, center_on(5)) == center_on(5));
  // Ties go to the lowest id, so the center covers the first edge and then everything.
  CHECK(repair_to_full_cover(star, JointState(5)) == center_on(5));
  const CoveringInstance one({1.0, 3.0}, {{{0, 1}, 1.0}});
  CHECK(repair_to_full_cover(one, JointState(2)) == JointState::from_bits("10"));
  const CoveringInstance pricey({3.0, 1.0, 1.0}, {{{0, 1}, 1.0}, {{0, 2}, 1.0}});
  CHECK(repair_to_full_cover(pricey, JointState(3)) == JointState::from_bits("011"));
}

TEST_CASE("delta1 star") {
  const auto star = gen_star(7, 0.5, 1.0);
  CHECK(delta1_star(star, center_on(7)) == 6u);
  CHECK(delta1_star(star, JointState(7, Action::on)) == 0u);
  CHECK_FALSE(delta1_star(star, JointState(7)).has_value());
  const CoveringInstance lonely({1.0, 1.0, 1.0}, {{{0, 1}, 1.0}});
  CHECK(delta1_star(lonely, JointState::from_bits("001")) == 0u);
}

TEST_CASE("condition (*) basics") {
  const auto star = gen_star(50, 0.5, 1.0);
  const auto all_on = make_ad_strategy(star, JointState(50, Action::on), Provenance::custom);
  const auto bad = check_star_condition(star, all_on, 0.5);
  CHECK_FALSE(bad.holds);
  CHECK(bad.x_min == 0.0);
  CHECK(bad.max_lhs >= 1.0);

  // Near alpha = 1 the check holds once x_min exceeds K.
  const auto center = make_ad_strategy(star, center_on(50), Provenance::custom);
  CHECK(check_star_condition(star, center, 0.999).holds);

  const CoveringInstance singles({1.0, 1.0}, {{{0}, 1.0}, {{1}, 1.0}});
  const auto v = check_star_condition(singles, make_ad_strategy(singles, JointState(2), Provenance::custom), 0.5);
  CHECK(v.holds);
  CHECK(v.vacuous);
  CHECK_THROWS(check_star_condition(star, center, 1.0));
}

TEST_CASE("condition (*) direct evaluation") {
  const auto inst = gen_star(500, 0.5, 1.0);
  const auto ad = make_ad_strategy(inst, center_on(500), Provenance::custom);
  const auto chk = check_star_condition(inst, ad, 0.5);
  // K = 1, beta = 0.25, x_min = 499, x_hat < x_min: lhs = x (0.75)^(x-1) at x = 499.
  const double lhs = 499.0 * std::pow(0.75, 498.0);
  CHECK(chk.K == 1);
  CHECK(chk.x_min == doctest::Approx(499.0));
  CHECK(chk.max_lhs == doctest::Approx(lhs).epsilon(1e-9));
  CHECK(chk.holds == (lhs <= 1.0 / (500.0 * 500.0)));
  CHECK(chk.holds);
}

TEST_CASE("condition (*) stays satisfied on growing stars") {
  // Grid scan of the checker on stars of growing size with the center advertised.
  for (double alpha : {0.3, 0.5, 0.8}) {
    bool seen = false;
    for (std::size_t n = 10; n <= 2000; n += 10) {
      const auto inst = gen_star(n, 0.5, 1.0);
      const bool holds = check_star_condition(inst, make_ad_strategy(inst, center_on(n), Provenance::custom), alpha).holds;
      if (seen) CHECK(holds);
      seen = seen || holds;
    }
    CHECK(seen);
  }
}

TEST_CASE("star greedy") {
  const auto small = gen_star(100, 0.5, 1.0);
  const auto base = make_ad_strategy(small, center_on(100), Provenance::lp_rounding);
  const double B = default_star_B(0.2, 2, 1);
  CHECK(B == doctest::Approx(4.0 / std::log(1.0 / (1.0 - 0.04)) * 3.0));
  const auto drained = build_star_greedy(small, base, 0.2);
  CHECK(drained.strategy.state.count_on() == 0);
  CHECK_FALSE(drained.warning.empty());

  // n - 1 >= B ln n keeps the center.
  const auto big = gen_star(500, 0.5, 1.0);
  const auto kept = build_star_greedy(big, make_ad_strategy(big, center_on(500), Provenance::lp_rounding), 0.5);
  CHECK(kept.threshold <= 499.0);
  CHECK(kept.strategy.state == center_on(500));
  CHECK(kept.check.holds);
  CHECK(kept.strategy.provenance == Provenance::star_greedy);

  const auto custom = build_star_greedy(small, base, 0.5, 1.0);
  CHECK(custom.strategy.state == center_on(100));
  CHECK(custom.turned_off.empty());
}

TEST_CASE("star greedy leaves strong coverers alone") {
  // Six disjoint stars with ten leaves each; every center uniquely covers its ten edges.
  std::vector<WeightedSet> sets;
  for (AgentId i = 0; i < 6; ++i)
    for (int r = 0; r < 10; ++r) sets.push_back({{i, 6 + i * 10 + static_cast<AgentId>(r)}, 1.0});
  const CoveringInstance inst(std::vector<double>(66, 0.5), sets);
  JointState s(66);
  for (AgentId i = 0; i < 6; ++i) s[i] = Action::on;
  const auto res = build_star_greedy(inst, make_ad_strategy(inst, s, Provenance::custom), 0.5, 0.5);
  CHECK(res.threshold < 10.0);
  CHECK(res.strategy.state == s);
}

TEST_CASE("property: simplex matches vertex enumeration") {
  Rng rng(77);
  for (int round = 0; round < 25; ++round) {
    const std::size_t n = 3 + rng.below(5);
    const std::size_t k = 1 + rng.below(3);
    const std::size_t m = 1 + rng.below(std::min<std::uint64_t>(binomial_count(n, k), 8));
    const auto inst = gen_random_uniform(n, m, k, {0.2, 3.0}, {0.5, 2.0}, rng.next());
    const auto lp = solve_lp_relaxation(inst);
    REQUIRE(lp.status == LpStatus::optimal);
    CHECK(lp.objective == doctest::Approx(vertex_enumeration_lp(inst)).epsilon(1e-6));
    double direct = 0.0;
    for (AgentId i = 0; i < n; ++i) direct += inst.cost(i) * lp.x[i];
    CHECK(direct == doctest::Approx(lp.objective).epsilon(1e-9));
    for (const auto& s : inst.sets()) {
      double covered = 0.0;
      for (auto j : s.members) covered += lp.x[j];
      CHECK(covered >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("property: rounding covers, lemma bound, lp below repaired optimum") {
  Rng rng(5);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 4 + rng.below(9);
    const std::size_t k = 2 + rng.below(2);
    const std::size_t m = 1 + rng.below(std::min<std::uint64_t>(binomial_count(n, k), 20));
    const auto inst = gen_random_uniform(n, m, k, {0.2, 3.0}, {0.5, 2.0}, rng.next());
    const auto st = compute_stats(inst);
    const auto lp = solve_lp_relaxation(inst);
    const auto ad = round_lp(inst, lp);
    CHECK(uncovered_sets(inst, ad.state).empty());
    const double opt = oracle::opt_cost(inst);
    const double factor = static_cast<double>(st.f_max) * std::ceil(st.c_max / *st.w_min);
    CHECK(social_cost(inst, ad.state) <= factor * opt + 1e-7);
    // The LP bounds every full cover, in particular the repaired optimum.
    const auto repaired = repair_to_full_cover(inst, brute_force_opt(inst).state);
    CHECK(lp.objective <= cost_of(inst, repaired.on_agents()) + 1e-7);
  }
}
