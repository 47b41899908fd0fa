#include "covgame/game.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace covgame {

JointState JointState::from_bits(std::string_view bits) {
  std::vector<Action> actions;
  actions.reserve(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    switch (bits[k]) {
      case '0': actions.push_back(Action::off); break;
      case '1': actions.push_back(Action::on); break;
      default:
        throw std::invalid_argument("action string: bad character '" + std::string(1, bits[k]) +
                                    "' at position " + std::to_string(k));
    }
  }
  return JointState(std::move(actions));
}

JointState JointState::with_on(std::size_t n, std::span<const AgentId> on_agents) {
  JointState s(n);
  for (AgentId i : on_agents) s.actions_.at(i) = Action::on;
  return s;
}

std::vector<AgentId> JointState::on_agents() const {
  std::vector<AgentId> out;
  for (AgentId i = 0; i < actions_.size(); ++i)
    if (actions_[i] == Action::on) out.push_back(i);
  return out;
}

std::vector<AgentId> JointState::off_agents() const {
  std::vector<AgentId> out;
  for (AgentId i = 0; i < actions_.size(); ++i)
    if (actions_[i] == Action::off) out.push_back(i);
  return out;
}

std::size_t JointState::count_on() const {
  return static_cast<std::size_t>(std::count(actions_.begin(), actions_.end(), Action::on));
}

std::string JointState::to_bits() const {
  std::string out(actions_.size(), '0');
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == Action::on) out[i] = '1';
  return out;
}

CoveringInstance::CoveringInstance(std::vector<double> costs, std::vector<WeightedSet> sets)
    : costs_(std::move(costs)) {
  const std::size_t n = costs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(costs_[i] > 0.0))
      throw InstanceError("cost of agent " + std::to_string(i) + " must be positive");
  }

  // Duplicate detection is reported against the caller's set index.
  std::map<std::vector<AgentId>, std::size_t> seen;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    auto& members = sets[k].members;
    if (members.empty()) throw InstanceError("set " + std::to_string(k) + " is empty");
    if (!(sets[k].weight > 0.0))
      throw InstanceError("weight of set " + std::to_string(k) + " must be positive");
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
      throw InstanceError("set " + std::to_string(k) + " has repeated members");
    if (members.back() >= n)
      throw InstanceError("set " + std::to_string(k) + " references agent " +
                          std::to_string(members.back()) + " outside [0, " + std::to_string(n) + ")");
    auto [it, inserted] = seen.emplace(members, k);
    if (!inserted)
      throw InstanceError("set " + std::to_string(k) + " duplicates set " + std::to_string(it->second));
  }

  std::sort(sets.begin(), sets.end(),
            [](const WeightedSet& a, const WeightedSet& b) { return a.members < b.members; });
  sets_ = std::move(sets);

  incidence_.assign(n, {});
  for (SetId s = 0; s < sets_.size(); ++s) {
    for (AgentId i : sets_[s].members) incidence_[i].push_back(s);
    total_weight_ += sets_[s].weight;
  }
  total_cost_ = std::accumulate(costs_.begin(), costs_.end(), 0.0);
}

std::size_t InstanceStats::delta(int k) const {
  switch (k) {
    case 1: return delta1;
    case 2: return delta2;
    default: throw std::out_of_range("delta_k is tracked for k in {1, 2} only");
  }
}

void check_dimensions(const CoveringInstance& inst, const JointState& s) {
  if (s.size() != inst.num_agents())
    throw DimensionError("state has " + std::to_string(s.size()) + " actions, instance has " +
                         std::to_string(inst.num_agents()) + " agents");
}

namespace {

void check_agent(const CoveringInstance& inst, AgentId i) {
  if (i >= inst.num_agents())
    throw std::out_of_range("agent " + std::to_string(i) + " outside [0, " +
                            std::to_string(inst.num_agents()) + ")");
}

bool covered(const WeightedSet& set, const JointState& s) {
  return std::any_of(set.members.begin(), set.members.end(), [&](AgentId j) { return s.is_on(j); });
}

bool covered_by_others(const WeightedSet& set, const JointState& s, AgentId i) {
  return std::any_of(set.members.begin(), set.members.end(),
                     [&](AgentId j) { return j != i && s.is_on(j); });
}

}  // namespace

std::vector<SetId> uncovered_sets(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  std::vector<SetId> out;
  for (SetId k = 0; k < inst.num_sets(); ++k)
    if (!covered(inst.set(k), s)) out.push_back(k);
  return out;
}

std::vector<SetId> uncovered_sets(const CoveringInstance& inst, const JointState& s, AgentId i) {
  check_dimensions(inst, s);
  check_agent(inst, i);
  std::vector<SetId> out;
  for (SetId k : inst.incident(i))
    if (!covered(inst.set(k), s)) out.push_back(k);
  return out;
}

double exposed_weight(const CoveringInstance& inst, const JointState& s, AgentId i) {
  check_dimensions(inst, s);
  check_agent(inst, i);
  double w = 0.0;
  for (SetId k : inst.incident(i))
    if (!covered_by_others(inst.set(k), s, i)) w += inst.set(k).weight;
  return w;
}

double agent_cost(const CoveringInstance& inst, const JointState& s, AgentId i) {
  check_dimensions(inst, s);
  check_agent(inst, i);
  if (s.is_on(i)) return inst.cost(i);
  return exposed_weight(inst, s, i);
}

double social_cost(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  double total = 0.0;
  for (AgentId i = 0; i < inst.num_agents(); ++i)
    if (s.is_on(i)) total += inst.cost(i);
  for (const auto& set : inst.sets())
    if (!covered(set, s)) total += static_cast<double>(set.members.size()) * set.weight;
  return total;
}

double social_cost_by_agents(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  double total = 0.0;
  for (AgentId i = 0; i < inst.num_agents(); ++i) total += agent_cost(inst, s, i);
  return total;
}

double potential(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  double total = 0.0;
  for (AgentId i = 0; i < inst.num_agents(); ++i)
    if (s.is_on(i)) total += inst.cost(i);
  for (const auto& set : inst.sets())
    if (!covered(set, s)) total += set.weight;
  return total;
}

Action best_response(const CoveringInstance& inst, const JointState& s, AgentId i) {
  const double off_cost = exposed_weight(inst, s, i);
  const double on_cost = inst.cost(i);
  if (s.is_on(i)) return off_cost < on_cost - kCostTolerance ? Action::off : Action::on;
  return on_cost < off_cost - kCostTolerance ? Action::on : Action::off;
}

NashVerdict is_nash_given_pinned(const CoveringInstance& inst, const JointState& s,
                                 const std::vector<bool>& pinned) {
  check_dimensions(inst, s);
  if (!pinned.empty() && pinned.size() != s.size())
    throw DimensionError("pinned mask length does not match the state");
  for (AgentId i = 0; i < inst.num_agents(); ++i) {
    if (!pinned.empty() && pinned[i]) continue;
    if (best_response(inst, s, i) != s[i]) return {false, i};
  }
  return {};
}

NashVerdict is_nash(const CoveringInstance& inst, const JointState& s) {
  return is_nash_given_pinned(inst, s, {});
}

InstanceStats compute_stats(const CoveringInstance& inst) {
  InstanceStats st;
  const std::size_t n = inst.num_agents();
  if (n > 0) {
    const auto [lo, hi] = std::minmax_element(inst.costs().begin(), inst.costs().end());
    st.c_min = *lo;
    st.c_max = *hi;
  }
  for (AgentId i = 0; i < n; ++i) st.delta1 = std::max(st.delta1, inst.incident(i).size());

  std::unordered_map<std::uint64_t, std::size_t> pair_count;
  for (const auto& set : inst.sets()) {
    st.f_max = std::max(st.f_max, set.members.size());
    st.w_min = st.w_min ? std::min(*st.w_min, set.weight) : set.weight;
    st.w_max = st.w_max ? std::max(*st.w_max, set.weight) : set.weight;
    const auto& m = set.members;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        const auto key = static_cast<std::uint64_t>(m[a]) * n + m[b];
        st.delta2 = std::max(st.delta2, ++pair_count[key]);
      }
  }
  return st;
}

double cost_of(const CoveringInstance& inst, std::span<const AgentId> agents) {
  double total = 0.0;
  for (AgentId i : agents) total += inst.cost(i);
  return total;
}

double weight_of(const CoveringInstance& inst, std::span<const SetId> sets) {
  double total = 0.0;
  for (SetId k : sets) total += inst.set(k).weight;
  return total;
}

}  // namespace covgame
