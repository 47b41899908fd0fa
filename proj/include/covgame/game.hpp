#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covgame {

using AgentId = std::size_t;
using SetId = std::size_t;

// Absolute tolerance for every comparison between cost aggregates.
inline constexpr double kCostTolerance = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Action : std::uint8_t { off = 0, on = 1 };

constexpr Action flip(Action a) { return a == Action::on ? Action::off : Action::on; }

/// One on/off action per agent.
class JointState {
 public:
  JointState() = default;
  explicit JointState(std::size_t n, Action fill = Action::off) : actions_(n, fill) {}
  explicit JointState(std::vector<Action> actions) : actions_(std::move(actions)) {}

  /// Parses "0101..." with '1' meaning on.
  static JointState from_bits(std::string_view bits);
  static JointState with_on(std::size_t n, std::span<const AgentId> on_agents);

  std::size_t size() const { return actions_.size(); }
  Action operator[](AgentId i) const { return actions_[i]; }
  Action& operator[](AgentId i) { return actions_[i]; }
  bool is_on(AgentId i) const { return actions_[i] == Action::on; }

  std::vector<AgentId> on_agents() const;
  std::vector<AgentId> off_agents() const;
  std::size_t count_on() const;
  std::string to_bits() const;

  const std::vector<Action>& actions() const { return actions_; }

  friend bool operator==(const JointState&, const JointState&) = default;
  friend auto operator<=>(const JointState&, const JointState&) = default;

 private:
  std::vector<Action> actions_;
};

struct WeightedSet {
  std::vector<AgentId> members;
  double weight = 1.0;

  friend bool operator==(const WeightedSet&, const WeightedSet&) = default;
};

/// Agents with on-costs and a weighted family of sets over them.
///
/// Construction validates and canonicalizes: members are sorted ascending and
/// sets are ordered lexicographically by member list, so set ids refer to the
/// canonical order. Duplicate member lists are rejected.
class CoveringInstance {
 public:
  CoveringInstance(std::vector<double> costs, std::vector<WeightedSet> sets);

  std::size_t num_agents() const { return costs_.size(); }
  std::size_t num_sets() const { return sets_.size(); }

  double cost(AgentId i) const { return costs_.at(i); }
  const std::vector<double>& costs() const { return costs_; }

  const WeightedSet& set(SetId s) const { return sets_.at(s); }
  const std::vector<WeightedSet>& sets() const { return sets_; }

  /// Ids of the sets containing agent i, ascending.
  std::span<const SetId> incident(AgentId i) const { return incidence_.at(i); }

  double total_weight() const { return total_weight_; }
  double total_cost() const { return total_cost_; }

  friend bool operator==(const CoveringInstance& a, const CoveringInstance& b) {
    return a.costs_ == b.costs_ && a.sets_ == b.sets_;
  }

 private:
  std::vector<double> costs_;
  std::vector<WeightedSet> sets_;
  std::vector<std::vector<SetId>> incidence_;
  double total_weight_ = 0.0;
  double total_cost_ = 0.0;
};

struct InstanceStats {
  std::size_t f_max = 0;
  std::size_t delta1 = 0;
  std::size_t delta2 = 0;
  double c_max = 0.0;
  double c_min = 0.0;
  // Absent when the set family is empty.
  std::optional<double> w_max;
  std::optional<double> w_min;

  std::size_t delta(int k) const;
};

struct NashVerdict {
  bool is_nash = true;
  // Agent with a strictly improving deviation when !is_nash.
  std::optional<AgentId> witness;

  explicit operator bool() const { return is_nash; }
};

/// Sets with every member off (all of F^u(s)).
std::vector<SetId> uncovered_sets(const CoveringInstance& inst, const JointState& s);
/// Uncovered sets containing agent i (F_i^u(s)).
std::vector<SetId> uncovered_sets(const CoveringInstance& inst, const JointState& s, AgentId i);

/// Weight of the sets containing i that would be uncovered if i were off.
double exposed_weight(const CoveringInstance& inst, const JointState& s, AgentId i);

double agent_cost(const CoveringInstance& inst, const JointState& s, AgentId i);

/// c(ON(s)) + sum over uncovered sets of |sigma| * w_sigma.
double social_cost(const CoveringInstance& inst, const JointState& s);
/// Sum of agent_cost over all agents; agrees with social_cost.
double social_cost_by_agents(const CoveringInstance& inst, const JointState& s);

/// Phi(s) = c(ON(s)) + w(F^u(s)).
double potential(const CoveringInstance& inst, const JointState& s);

/// Best response of agent i. Keeps the current action unless the other one is
/// strictly cheaper by more than kCostTolerance.
Action best_response(const CoveringInstance& inst, const JointState& s, AgentId i);

NashVerdict is_nash(const CoveringInstance& inst, const JointState& s);
/// Nash test restricted to the agents with pinned[i] == false.
NashVerdict is_nash_given_pinned(const CoveringInstance& inst, const JointState& s,
                                 const std::vector<bool>& pinned);

InstanceStats compute_stats(const CoveringInstance& inst);

double cost_of(const CoveringInstance& inst, std::span<const AgentId> agents);
double weight_of(const CoveringInstance& inst, std::span<const SetId> sets);

void check_dimensions(const CoveringInstance& inst, const JointState& s);

}  // namespace covgame
