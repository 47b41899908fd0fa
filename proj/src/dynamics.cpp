#include "covgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "covgame/format.hpp"
#include "covgame/rng.hpp"

namespace covgame {

const char* to_string(SchedulePolicy p) {
  switch (p) {
    case SchedulePolicy::uniform_random: return "uniform-random";
    case SchedulePolicy::random_permutation_sweeps: return "random-permutation-sweeps";
    case SchedulePolicy::round_robin: return "round-robin";
  }
  return "?";
}

const char* to_string(CommitPolicy p) {
  switch (p) {
    case CommitPolicy::myopic_compare: return "myopic-compare";
    case CommitPolicy::always_best_response: return "always-best-response";
    case CommitPolicy::bernoulli_p: return "bernoulli-p";
  }
  return "?";
}

const char* to_string(UpdateMode m) {
  switch (m) {
    case UpdateMode::best_response: return "best-response";
    case UpdateMode::follow_ad: return "follow-ad";
    case UpdateMode::commit: return "commit";
  }
  return "?";
}

SchedulePolicy parse_schedule_policy(const std::string& s) {
  if (s == "uniform-random") return SchedulePolicy::uniform_random;
  if (s == "random-permutation-sweeps") return SchedulePolicy::random_permutation_sweeps;
  if (s == "round-robin") return SchedulePolicy::round_robin;
  throw std::invalid_argument("unknown schedule policy: " + s);
}

CommitPolicy parse_commit_policy(const std::string& s) {
  if (s == "myopic-compare") return CommitPolicy::myopic_compare;
  if (s == "always-best-response") return CommitPolicy::always_best_response;
  if (s == "bernoulli-p") return CommitPolicy::bernoulli_p;
  throw std::invalid_argument("unknown commit policy: " + s);
}

std::size_t DynamicsTrace::events_in_phase(std::size_t phase) const {
  const std::size_t begin = phase == 0 ? 0 : phase_boundaries.at(phase - 1);
  const std::size_t end = phase < phase_boundaries.size() ? phase_boundaries[phase] : events.size();
  return end - begin;
}

std::uint64_t default_t_star(std::size_t n) {
  return static_cast<std::uint64_t>(std::ceil(12.0 * static_cast<double>(n) * std::log(n + 1.0)));
}

namespace {

// Smallest D <= 1000 making every cost and weight an integer multiple of 1/D.
std::optional<std::uint64_t> common_denominator(const CoveringInstance& inst) {
  auto fits = [](double v, std::uint64_t d) {
    const double scaled = v * static_cast<double>(d);
    return std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled);
  };
  for (std::uint64_t d = 1; d <= 1000; ++d) {
    bool ok = std::all_of(inst.costs().begin(), inst.costs().end(), [&](double c) { return fits(c, d); });
    for (std::size_t k = 0; ok && k < inst.num_sets(); ++k) ok = fits(inst.set(k).weight, d);
    if (ok) return d;
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t default_step_cap(const CoveringInstance& inst) {
  constexpr std::uint64_t kFallback = 1'000'000;
  const auto d = common_denominator(inst);
  if (!d) return kFallback;
  // Each strict move lowers Phi by at least 1/D, and Phi <= c(all) + w(all).
  const double moves = 10.0 * static_cast<double>(std::max<std::size_t>(inst.num_agents(), 1)) *
                       (1.0 + (inst.total_cost() + inst.total_weight()) * static_cast<double>(*d));
  if (moves > 1e12) return static_cast<std::uint64_t>(1e12);
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(moves), 1);
}

namespace {

/// Live state with per-set on-counts, so best responses cost O(degree).
class Tracker {
 public:
  Tracker(const CoveringInstance& inst, JointState s) : inst_(inst), s_(std::move(s)) {
    check_dimensions(inst_, s_);
    on_count_.assign(inst_.num_sets(), 0);
    for (AgentId i = 0; i < s_.size(); ++i)
      if (s_.is_on(i))
        for (SetId k : inst_.incident(i)) ++on_count_[k];
    phi_ = potential(inst_, s_);
  }

  const JointState& state() const { return s_; }
  double phi() const { return phi_; }

  double exposed(AgentId i) const {
    const std::uint32_t self = s_.is_on(i) ? 1 : 0;
    double w = 0.0;
    for (SetId k : inst_.incident(i))
      if (on_count_[k] == self) w += inst_.set(k).weight;
    return w;
  }

  double cost_if(AgentId i, Action a) const { return a == Action::on ? inst_.cost(i) : exposed(i); }

  Action best(AgentId i) const {
    const double off_cost = exposed(i);
    const double on_cost = inst_.cost(i);
    if (s_.is_on(i)) return off_cost < on_cost - kCostTolerance ? Action::off : Action::on;
    return on_cost < off_cost - kCostTolerance ? Action::on : Action::off;
  }

  // Returns the change in potential (equal to the change in i's own cost).
  double set(AgentId i, Action a) {
    if (s_[i] == a) return 0.0;
    const double w = exposed(i);
    const double delta = a == Action::on ? inst_.cost(i) - w : w - inst_.cost(i);
    for (SetId k : inst_.incident(i)) {
      if (a == Action::on) ++on_count_[k];
      else --on_count_[k];
    }
    s_[i] = a;
    phi_ += delta;
    return delta;
  }

 private:
  const CoveringInstance& inst_;
  JointState s_;
  std::vector<std::uint32_t> on_count_;
  double phi_ = 0.0;
};

struct Run {
  Tracker tracker;
  DynamicsTrace trace;
  std::uint64_t clock = 0;

  Run(const CoveringInstance& inst, JointState start) : tracker(inst, start) {
    trace.start = std::move(start);
    trace.start_potential = tracker.phi();
  }

  void apply(AgentId i, Action a, UpdateMode mode) {
    const Action old = tracker.state()[i];
    if (old == a) return;
    tracker.set(i, a);
    trace.events.push_back({clock, i, old, a, mode, tracker.phi()});
  }

  void mark_phase() { trace.phase_boundaries.push_back(trace.events.size()); }
};

std::uint64_t resolve_cap(const CoveringInstance& inst, std::optional<std::uint64_t> cap) {
  if (cap) {
    if (*cap < 1) throw std::invalid_argument("max_steps must be at least 1");
    return *cap;
  }
  return default_step_cap(inst);
}

// Best-response dynamics over the unpinned agents. Returns false on cap exhaustion.
bool best_response_phase(Run& run, const CoveringInstance& inst, const std::vector<bool>& pinned,
                         const ScheduleConfig& sched, Rng& rng, std::uint64_t cap) {
  const std::size_t n = inst.num_agents();
  std::vector<AgentId> free_agents;
  if (sched.policy == SchedulePolicy::round_robin && !sched.order.empty()) {
    if (sched.order.size() != n) throw DimensionError("round-robin order must list every agent");
    free_agents = sched.order;
  } else {
    free_agents.resize(n);
    std::iota(free_agents.begin(), free_agents.end(), AgentId{0});
  }
  std::erase_if(free_agents, [&](AgentId i) { return !pinned.empty() && pinned[i]; });

  std::uint64_t moves = 0;
  if (sched.policy == SchedulePolicy::uniform_random) {
    std::vector<AgentId> unhappy;
    for (;;) {
      unhappy.clear();
      for (AgentId i : free_agents)
        if (run.tracker.best(i) != run.tracker.state()[i]) unhappy.push_back(i);
      if (unhappy.empty()) return true;
      if (moves == cap) return false;
      const AgentId i = unhappy[rng.below(unhappy.size())];
      ++run.clock;
      run.apply(i, run.tracker.best(i), UpdateMode::best_response);
      ++moves;
    }
  }

  for (;;) {
    if (sched.policy == SchedulePolicy::random_permutation_sweeps)
      rng.shuffle(std::span<AgentId>(free_agents));
    bool changed = false;
    for (AgentId i : free_agents) {
      ++run.clock;
      const Action b = run.tracker.best(i);
      if (b == run.tracker.state()[i]) continue;
      if (moves == cap) return false;
      run.apply(i, b, UpdateMode::best_response);
      ++moves;
      changed = true;
    }
    if (!changed) return true;
  }
}

JointState random_state(std::size_t n, Rng& rng) {
  JointState s(n);
  for (AgentId i = 0; i < n; ++i) s[i] = rng.bernoulli(0.5) ? Action::on : Action::off;
  return s;
}

PsaResult psa_impl(const CoveringInstance& inst, const JointState& s_ad, std::vector<bool> receptive,
                   const PsaConfig& cfg, Rng& rng) {
  const std::size_t n = inst.num_agents();
  JointState start = cfg.initial_state ? *cfg.initial_state : random_state(n, rng);
  check_dimensions(inst, start);
  const std::uint64_t cap = resolve_cap(inst, cfg.schedule.max_steps);

  Run run(inst, start);
  for (AgentId i = 0; i < n; ++i)
    if (receptive[i]) run.apply(i, s_ad[i], UpdateMode::follow_ad);
  bool ok = best_response_phase(run, inst, receptive, cfg.schedule, rng, cap);
  run.trace.s_prime = run.tracker.state();
  run.mark_phase();
  if (ok) ok = best_response_phase(run, inst, {}, cfg.schedule, rng, cap);
  run.trace.s_double_prime = run.tracker.state();
  run.trace.converged = ok;
  run.trace.activations = run.clock;

  PsaResult out;
  out.diagnostics = compute_diagnostics(inst, s_ad, run.trace.s_prime);
  out.trace = std::move(run.trace);
  out.receptive = std::move(receptive);
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

DynamicsTrace run_best_response_pinned(const CoveringInstance& inst, const JointState& start,
                                       const std::vector<bool>& pinned, const ScheduleConfig& sched) {
  check_dimensions(inst, start);
  if (!pinned.empty() && pinned.size() != inst.num_agents())
    throw DimensionError("pinned mask length does not match the instance");
  Rng rng(sched.seed);
  Run run(inst, start);
  const bool ok = best_response_phase(run, inst, pinned, sched, rng, resolve_cap(inst, sched.max_steps));
  run.trace.s_prime = run.tracker.state();
  run.trace.s_double_prime = run.tracker.state();
  run.trace.converged = ok;
  run.trace.activations = run.clock;
  return std::move(run.trace);
}

DynamicsTrace run_best_response(const CoveringInstance& inst, const JointState& start,
                                const ScheduleConfig& sched) {
  return run_best_response_pinned(inst, start, {}, sched);
}

PsaResult run_psa(const CoveringInstance& inst, const JointState& s_ad, const PsaConfig& cfg) {
  check_dimensions(inst, s_ad);
  check_alpha(cfg.alpha);
  Rng rng(cfg.schedule.seed);
  std::vector<bool> receptive(inst.num_agents());
  for (AgentId i = 0; i < receptive.size(); ++i) receptive[i] = rng.bernoulli(cfg.alpha);
  return psa_impl(inst, s_ad, std::move(receptive), cfg, rng);
}

PsaResult run_psa_with_receptive(const CoveringInstance& inst, const JointState& s_ad,
                                 const std::vector<bool>& receptive, const PsaConfig& cfg) {
  check_dimensions(inst, s_ad);
  if (receptive.size() != inst.num_agents())
    throw DimensionError("receptive mask length does not match the instance");
  Rng rng(cfg.schedule.seed);
  return psa_impl(inst, s_ad, receptive, cfg, rng);
}

LtdResult run_ltd(const CoveringInstance& inst, const JointState& s_ad, const LtdConfig& cfg) {
  check_dimensions(inst, s_ad);
  const std::size_t n = inst.num_agents();
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  std::vector<double> p = cfg.p.empty() ? std::vector<double>(n, cfg.beta) : cfg.p;
  if (p.size() != n) throw DimensionError("follow probabilities must have one entry per agent");
  for (double pi : p)
    if (!(pi >= cfg.beta && pi <= 1.0))
      throw std::invalid_argument("every follow probability must lie in [beta, 1]");

  LtdResult out;
  out.t_star = cfg.t_star.value_or(default_t_star(n));
  out.t_prime = cfg.t_prime.value_or((out.t_star + 1) / 2);
  if (out.t_star < 1 || out.t_prime < 1 || out.t_prime >= out.t_star)
    throw std::invalid_argument("need 1 <= T' < T*");

  Rng rng(cfg.seed);
  JointState start = cfg.initial_state ? *cfg.initial_state : random_state(n, rng);
  check_dimensions(inst, start);
  Run run(inst, start);

  // Update bookkeeping for the ordering event; time 0 means "never".
  std::vector<std::uint64_t> first_update(n, 0), last_before_tp(n, 0);
  std::vector<bool> after_tp(n, false);

  for (std::uint64_t t = 1; t <= out.t_star && n > 0; ++t) {
    run.clock = t;
    const auto i = static_cast<AgentId>(rng.below(n));
    if (first_update[i] == 0) first_update[i] = t;
    if (t < out.t_prime) last_before_tp[i] = t;
    else after_tp[i] = true;
    if (rng.bernoulli(p[i])) run.apply(i, s_ad[i], UpdateMode::follow_ad);
    else run.apply(i, run.tracker.best(i), UpdateMode::best_response);
  }
  run.trace.s_prime = run.tracker.state();
  run.mark_phase();

  // Phase 2: commitments in random order, then responders settle.
  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), AgentId{0});
  rng.shuffle(std::span<AgentId>(order));
  out.follower.assign(n, false);
  for (AgentId i : order) {
    ++run.clock;
    bool follow = false;
    switch (cfg.commit_policy) {
      case CommitPolicy::myopic_compare: {
        const double follow_cost = run.tracker.cost_if(i, s_ad[i]);
        const double respond_cost = run.tracker.cost_if(i, run.tracker.best(i));
        follow = follow_cost <= respond_cost + kCostTolerance;
        break;
      }
      case CommitPolicy::always_best_response: break;
      case CommitPolicy::bernoulli_p: follow = rng.bernoulli(p[i]); break;
    }
    out.follower[i] = follow;
    if (follow) run.apply(i, s_ad[i], UpdateMode::commit);
  }
  ScheduleConfig rotation;
  rotation.policy = SchedulePolicy::random_permutation_sweeps;
  const bool ok = best_response_phase(run, inst, out.follower, rotation, rng, resolve_cap(inst, cfg.max_steps));
  run.trace.s_double_prime = run.tracker.state();
  run.trace.converged = ok;
  run.trace.activations = run.clock;

  out.diagnostics = compute_diagnostics(inst, s_ad, run.trace.s_prime);
  const auto& L = out.diagnostics.L;
  const auto& R = out.diagnostics.R;
  bool event = true;
  std::uint64_t r_done = 0;
  for (AgentId r : R) {
    if (first_update[r] == 0) event = false;
    r_done = std::max(r_done, first_update[r]);
  }
  if (event && r_done >= out.t_prime) event = false;
  for (AgentId l : L)
    if (last_before_tp[l] <= r_done) event = false;
  for (AgentId r : R)
    if (!after_tp[r]) event = false;
  out.diagnostics.event_E_holds = event;

  out.trace = std::move(run.trace);
  return out;
}

PhaseDiagnostics compute_diagnostics(const CoveringInstance& inst, const JointState& s_ad,
                                     const JointState& s_prime) {
  check_dimensions(inst, s_ad);
  check_dimensions(inst, s_prime);
  PhaseDiagnostics d;
  for (AgentId i = 0; i < inst.num_agents(); ++i) {
    if (s_ad.is_on(i)) {
      d.L.push_back(i);
      if (!s_prime.is_on(i)) d.L_off.push_back(i);
    } else {
      d.R.push_back(i);
      if (s_prime.is_on(i)) d.R_on.push_back(i);
    }
  }
  for (SetId k = 0; k < inst.num_sets(); ++k) {
    const auto& members = inst.set(k).members;
    bool covered_ad = false, covered_prime = false, touches_L = false, L_all_off = true;
    for (AgentId j : members) {
      covered_ad = covered_ad || s_ad.is_on(j);
      covered_prime = covered_prime || s_prime.is_on(j);
      if (s_ad.is_on(j)) {
        touches_L = true;
        if (s_prime.is_on(j)) L_all_off = false;
      }
    }
    if (!covered_ad) d.F_R.push_back(k);
    else if (!covered_prime) d.F_bad.push_back(k);
    if (touches_L && L_all_off) d.F_off.push_back(k);
  }
  d.c_L = cost_of(inst, d.L);
  d.c_R_on = cost_of(inst, d.R_on);
  d.w_F_R = weight_of(inst, d.F_R);
  d.w_F_bad = weight_of(inst, d.F_bad);
  return d;
}

bool potential_monotone_on_best_response(const DynamicsTrace& trace) {
  double prev = trace.start_potential;
  for (const auto& e : trace.events) {
    if (e.mode == UpdateMode::best_response && !(e.potential < prev)) return false;
    prev = e.potential;
  }
  return true;
}

void write_trace(std::ostream& os, const DynamicsTrace& trace) {
  for (const auto& e : trace.events) {
    os << e.t << ',' << e.agent << ',' << static_cast<int>(e.old_action) << ','
       << static_cast<int>(e.new_action) << ',' << to_string(e.mode) << ','
       << format_double(e.potential) << '\n';
  }
}

std::string format_trace(const DynamicsTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

}  // namespace covgame
