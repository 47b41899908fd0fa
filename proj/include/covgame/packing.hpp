#pragma once

#include <vector>

#include "covgame/game.hpp"

namespace covgame {

/// Packing reading of a covering instance: an off agent pays c_i, an on agent
/// pays the weight of its fully-on sets.
class PackingView {
 public:
  explicit PackingView(const CoveringInstance& inst) : inst_(&inst) {}
  const CoveringInstance& instance() const { return *inst_; }

 private:
  const CoveringInstance* inst_;
};

double packing_agent_cost(const PackingView& view, const JointState& s, AgentId i);
double packing_social_cost(const PackingView& view, const JointState& s);
Action packing_best_response(const PackingView& view, const JointState& s, AgentId i);
bool is_packing_nash(const PackingView& view, const JointState& s);

/// Flips every action.
JointState relabel_state(const JointState& s);

struct CorrespondenceReport {
  std::size_t n = 0;
  bool all_size_two = true;
  std::size_t covering_equilibria = 0;
  std::size_t packing_equilibria = 0;
  // States where exactly one of (covering NE at relabel(s), packing NE at s) holds.
  std::vector<JointState> mismatches;

  bool matches() const { return mismatches.empty() && covering_equilibria == packing_equilibria; }
};

/// Exhaustive comparison of covering and packing equilibria over all 2^n states.
/// Throws std::invalid_argument when n > nmax.
CorrespondenceReport nash_correspondence_check(const CoveringInstance& inst, std::size_t nmax = 22);

/// True when ON(s) meets every set and dropping any on-agent breaks that.
bool is_minimal_cover(const CoveringInstance& inst, const JointState& s);
/// True when no set is fully on and every off agent would complete some set.
bool is_maximal_independent(const CoveringInstance& inst, const JointState& s);

}  // namespace covgame
