#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covgame/game.hpp"

namespace covgame {

enum class LpStatus { optimal, infeasible, iteration_cap };

/// Fractional cover: minimize sum c_i x_i s.t. sum_{i in sigma} x_i >= 1, x in [0,1]^n.
struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  LpStatus status = LpStatus::optimal;
  std::size_t pivots = 0;
};

enum class Provenance { lp_rounding, star_greedy, custom };

struct AdStrategy {
  JointState state;
  Provenance provenance = Provenance::custom;
  // nullopt when no agent is on (the +infinity convention).
  std::optional<std::size_t> delta1_star;
  double f_r_weight = 0.0;
};

struct StarCheck {
  bool holds = false;
  bool vacuous = false;
  std::size_t K = 1;
  double beta = 0.0;
  double x_min = 0.0;
  double x_hat = 0.0;
  double max_lhs = 0.0;  // sup over x >= x_min of K x^K (1-beta)^(x-K)
  double bound = 0.0;    // 1/n^2
  double max_violation = 0.0;
  std::string warning;
};

struct StarGreedyResult {
  AdStrategy strategy;
  StarCheck check;
  double B = 0.0;
  double threshold = 0.0;  // B * Delta_2 * ln n
  std::vector<AgentId> turned_off;
  std::string warning;
};

const char* to_string(LpStatus s);
const char* to_string(Provenance p);

LpSolution solve_lp_relaxation(const CoveringInstance& inst, std::size_t max_pivots = 200000);

/// On iff x_i >= 1/f_max (with 1e-9 slack).
AdStrategy round_lp(const CoveringInstance& inst, const LpSolution& lp);

/// Turns on, for each still-uncovered set in id order, its cheapest member (lowest id on ties).
JointState repair_to_full_cover(const CoveringInstance& inst, const JointState& s);

/// Minimum over on-agents of the number of sets they cover as the unique on-member.
std::optional<std::size_t> delta1_star(const CoveringInstance& inst, const JointState& s);

AdStrategy make_ad_strategy(const CoveringInstance& inst, JointState s, Provenance provenance);

StarCheck check_star_condition(const CoveringInstance& inst, const AdStrategy& ad, double alpha);

/// 4 / ln(1/(1 - alpha^f_max)) * (1 + 2K).
double default_star_B(double alpha, std::size_t f_max, std::size_t K);

/// Greedily switches off on-agents that uniquely cover fewer than B * Delta_2 * ln n sets.
/// B <= 0 selects default_star_B.
StarGreedyResult build_star_greedy(const CoveringInstance& inst, const AdStrategy& base, double alpha,
                                   double B = 0.0);

/// max(1, floor(c_max / w_min)); 1 for an empty family.
std::size_t star_K(const CoveringInstance& inst);

}  // namespace covgame
