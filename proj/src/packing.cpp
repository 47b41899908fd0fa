#include "covgame/packing.hpp"

#include <algorithm>
#include <cstdint>

namespace covgame {

namespace {

bool all_on(const WeightedSet& set, const JointState& s) {
  return std::all_of(set.members.begin(), set.members.end(), [&](AgentId j) { return s.is_on(j); });
}

bool others_on(const WeightedSet& set, const JointState& s, AgentId i) {
  return std::all_of(set.members.begin(), set.members.end(), [&](AgentId j) { return j == i || s.is_on(j); });
}

// Weight agent i would carry if it were on.
double completed_weight(const CoveringInstance& inst, const JointState& s, AgentId i) {
  double w = 0.0;
  for (SetId k : inst.incident(i))
    if (others_on(inst.set(k), s, i)) w += inst.set(k).weight;
  return w;
}

}  // namespace

double packing_agent_cost(const PackingView& view, const JointState& s, AgentId i) {
  const auto& inst = view.instance();
  check_dimensions(inst, s);
  if (i >= inst.num_agents()) throw std::out_of_range("agent id out of range");
  if (!s.is_on(i)) return inst.cost(i);
  double w = 0.0;
  for (SetId k : inst.incident(i))
    if (all_on(inst.set(k), s)) w += inst.set(k).weight;
  return w;
}

double packing_social_cost(const PackingView& view, const JointState& s) {
  double total = 0.0;
  for (AgentId i = 0; i < s.size(); ++i) total += packing_agent_cost(view, s, i);
  return total;
}

Action packing_best_response(const PackingView& view, const JointState& s, AgentId i) {
  const auto& inst = view.instance();
  check_dimensions(inst, s);
  const double on_cost = completed_weight(inst, s, i);
  const double off_cost = inst.cost(i);
  if (s.is_on(i)) return off_cost < on_cost - kCostTolerance ? Action::off : Action::on;
  return on_cost < off_cost - kCostTolerance ? Action::on : Action::off;
}

bool is_packing_nash(const PackingView& view, const JointState& s) {
  for (AgentId i = 0; i < s.size(); ++i)
    if (packing_best_response(view, s, i) != s[i]) return false;
  return true;
}

JointState relabel_state(const JointState& s) {
  JointState out = s;
  for (AgentId i = 0; i < out.size(); ++i) out[i] = flip(out[i]);
  return out;
}

CorrespondenceReport nash_correspondence_check(const CoveringInstance& inst, std::size_t nmax) {
  const std::size_t n = inst.num_agents();
  if (n > nmax || n >= 63)
    throw std::invalid_argument("nash_correspondence_check: n = " + std::to_string(n) +
                                " exceeds the enumeration cap " + std::to_string(nmax));
  CorrespondenceReport rep;
  rep.n = n;
  rep.all_size_two = std::all_of(inst.sets().begin(), inst.sets().end(),
                                 [](const WeightedSet& set) { return set.members.size() == 2; });
  const PackingView view(inst);
  JointState s(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (AgentId i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? Action::on : Action::off;
    const bool pack = is_packing_nash(view, s);
    const bool cover = is_nash(inst, relabel_state(s)).is_nash;
    rep.packing_equilibria += pack;
    rep.covering_equilibria += cover;
    if (pack != cover) rep.mismatches.push_back(s);
  }
  return rep;
}

bool is_minimal_cover(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  if (!uncovered_sets(inst, s).empty()) return false;
  JointState t = s;
  for (AgentId i = 0; i < s.size(); ++i) {
    if (!s.is_on(i)) continue;
    t[i] = Action::off;
    const bool still_covers = uncovered_sets(inst, t, i).empty();
    t[i] = Action::on;
    if (still_covers) return false;
  }
  return true;
}

bool is_maximal_independent(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  for (const auto& set : inst.sets())
    if (all_on(set, s)) return false;
  for (AgentId i = 0; i < s.size(); ++i) {
    if (s.is_on(i)) continue;
    const auto inc = inst.incident(i);
    const bool blocked = std::any_of(inc.begin(), inc.end(), [&](SetId k) { return others_on(inst.set(k), s, i); });
    if (!blocked) return false;
  }
  return true;
}

}  // namespace covgame
