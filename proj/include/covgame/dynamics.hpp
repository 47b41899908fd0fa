#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covgame/game.hpp"

namespace covgame {

enum class SchedulePolicy { uniform_random, random_permutation_sweeps, round_robin };

struct ScheduleConfig {
  SchedulePolicy policy = SchedulePolicy::random_permutation_sweeps;
  std::uint64_t seed = 0;
  // Cap on action changes; unset means default_step_cap(instance).
  std::optional<std::uint64_t> max_steps;
  // Sweep order for round_robin; empty means 0..n-1.
  std::vector<AgentId> order;
};

struct PsaConfig {
  double alpha = 0.5;
  ScheduleConfig schedule;
  // Unset means a uniform random start drawn from the schedule seed.
  std::optional<JointState> initial_state;
};

enum class CommitPolicy { myopic_compare, always_best_response, bernoulli_p };

struct LtdConfig {
  double beta = 0.5;
  // Per-agent follow probabilities; empty means p_i = beta for all i.
  std::vector<double> p;
  // Unset means ceil(12 n ln(n+1)) and ceil(T*/2).
  std::optional<std::uint64_t> t_star;
  std::optional<std::uint64_t> t_prime;
  CommitPolicy commit_policy = CommitPolicy::myopic_compare;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_steps;
  std::optional<JointState> initial_state;
};

enum class UpdateMode { best_response, follow_ad, commit };

struct UpdateEvent {
  std::uint64_t t = 0;
  AgentId agent = 0;
  Action old_action = Action::off;
  Action new_action = Action::off;
  UpdateMode mode = UpdateMode::best_response;
  double potential = 0.0;  // after the event
};

/// Record of one run. Only action changes are logged as events.
struct DynamicsTrace {
  JointState start;
  double start_potential = 0.0;
  std::vector<UpdateEvent> events;
  // Index into `events` where each later phase begins.
  std::vector<std::size_t> phase_boundaries;
  JointState s_prime;        // end of phase 1 (or the final state for plain BR)
  JointState s_double_prime; // end of phase 2
  bool converged = true;
  std::uint64_t activations = 0;

  std::size_t events_in_phase(std::size_t phase) const;
};

struct PhaseDiagnostics {
  std::vector<AgentId> L, R;
  std::vector<AgentId> L_off, R_on;
  std::vector<SetId> F_R, F_bad, F_off;
  double c_L = 0.0;
  double c_R_on = 0.0;
  double w_F_R = 0.0;
  double w_F_bad = 0.0;
  // LTD only.
  std::optional<bool> event_E_holds;
};

struct PsaResult {
  DynamicsTrace trace;
  PhaseDiagnostics diagnostics;
  std::vector<bool> receptive;
};

struct LtdResult {
  DynamicsTrace trace;
  PhaseDiagnostics diagnostics;
  std::vector<bool> follower;  // phase-2 commitments
  std::uint64_t t_star = 0;
  std::uint64_t t_prime = 0;
};

const char* to_string(SchedulePolicy p);
const char* to_string(CommitPolicy p);
const char* to_string(UpdateMode m);
SchedulePolicy parse_schedule_policy(const std::string& s);
CommitPolicy parse_commit_policy(const std::string& s);

std::uint64_t default_t_star(std::size_t n);
std::uint64_t default_step_cap(const CoveringInstance& inst);

/// Best-response dynamics from `start` until Nash or the step cap.
DynamicsTrace run_best_response(const CoveringInstance& inst, const JointState& start,
                                const ScheduleConfig& sched);

/// Best-response dynamics where agents with pinned[i] never move.
DynamicsTrace run_best_response_pinned(const CoveringInstance& inst, const JointState& start,
                                       const std::vector<bool>& pinned, const ScheduleConfig& sched);

PsaResult run_psa(const CoveringInstance& inst, const JointState& s_ad, const PsaConfig& cfg);

/// PSA with a fixed receptive set instead of sampling one with probability alpha.
PsaResult run_psa_with_receptive(const CoveringInstance& inst, const JointState& s_ad,
                                 const std::vector<bool>& receptive, const PsaConfig& cfg);

LtdResult run_ltd(const CoveringInstance& inst, const JointState& s_ad, const LtdConfig& cfg);

PhaseDiagnostics compute_diagnostics(const CoveringInstance& inst, const JointState& s_ad,
                                     const JointState& s_prime);

/// True when every logged best-response change strictly lowered the potential.
bool potential_monotone_on_best_response(const DynamicsTrace& trace);

/// One "t,agent,old,new,mode,potential" line per event.
void write_trace(std::ostream& os, const DynamicsTrace& trace);
std::string format_trace(const DynamicsTrace& trace);

}  // namespace covgame
