// Exhaustive OPT and pure-Nash enumeration over bitmask states.

#include <algorithm>
#include <limits>

#include "covgame/harness.hpp"

namespace covgame {

namespace {

// Bit (n-1-i) holds agent i, so ascending masks are ascending action vectors.
struct MaskGame {
  std::size_t n;
  std::vector<std::uint64_t> agent_bit;
  std::vector<std::uint64_t> set_mask;
  std::vector<double> set_penalty;  // |sigma| * w_sigma
  std::vector<double> lo_cost, hi_cost;
  std::size_t lo_bits;

  explicit MaskGame(const CoveringInstance& inst) : n(inst.num_agents()) {
    agent_bit.resize(n);
    for (AgentId i = 0; i < n; ++i) agent_bit[i] = std::uint64_t{1} << (n - 1 - i);
    for (const auto& s : inst.sets()) {
      std::uint64_t m = 0;
      for (AgentId j : s.members) m |= agent_bit[j];
      set_mask.push_back(m);
      set_penalty.push_back(static_cast<double>(s.members.size()) * s.weight);
    }
    // On-cost via two lookup tables over the low and high halves of the mask.
    lo_bits = n / 2;
    const std::size_t hi_bits = n - lo_bits;
    lo_cost.assign(std::size_t{1} << lo_bits, 0.0);
    hi_cost.assign(std::size_t{1} << hi_bits, 0.0);
    for (std::size_t b = 0; b < lo_bits; ++b) {
      const double c = inst.cost(n - 1 - b);
      for (std::size_t m = 0; m < lo_cost.size(); ++m)
        if (m >> b & 1) lo_cost[m] += c;
    }
    for (std::size_t b = 0; b < hi_bits; ++b) {
      const double c = inst.cost(n - 1 - (lo_bits + b));
      for (std::size_t m = 0; m < hi_cost.size(); ++m)
        if (m >> b & 1) hi_cost[m] += c;
    }
  }

  double cost(std::uint64_t mask) const {
    double total = lo_cost[mask & ((std::uint64_t{1} << lo_bits) - 1)] + hi_cost[mask >> lo_bits];
    for (std::size_t k = 0; k < set_mask.size(); ++k)
      if ((mask & set_mask[k]) == 0) total += set_penalty[k];
    return total;
  }

  JointState state(std::uint64_t mask) const {
    JointState s(n);
    for (AgentId i = 0; i < n; ++i)
      if (mask & agent_bit[i]) s[i] = Action::on;
    return s;
  }
};

void check_cap(const CoveringInstance& inst, std::size_t nmax, const char* what) {
  const std::size_t cap = std::min<std::size_t>(nmax, 40);
  if (inst.num_agents() > cap)
    throw EnumerationCapError(std::string(what) + ": n = " + std::to_string(inst.num_agents()) +
                              " exceeds the exhaustive cap of " + std::to_string(cap) +
                              "; use the LP lower bound (advertise lp) instead");
}

}  // namespace

OptResult brute_force_opt(const CoveringInstance& inst, std::size_t nmax) {
  check_cap(inst, nmax, "brute_force_opt");
  const MaskGame g(inst);
  const std::uint64_t end = std::uint64_t{1} << g.n;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    const double c = g.cost(mask);
    if (c < best - kCostTolerance) {
      best = c;
      best_mask = mask;
    }
  }
  OptResult out;
  out.state = g.state(best_mask);
  out.cost = social_cost(inst, out.state);
  return out;
}

NashEnumeration enumerate_nash(const CoveringInstance& inst, std::size_t nmax) {
  check_cap(inst, nmax, "enumerate_nash");
  const MaskGame g(inst);
  std::vector<std::vector<SetId>> incident(g.n);
  for (AgentId i = 0; i < g.n; ++i) incident[i].assign(inst.incident(i).begin(), inst.incident(i).end());

  NashEnumeration out;
  out.opt = brute_force_opt(inst, nmax).cost;
  const std::uint64_t end = std::uint64_t{1} << g.n;
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    bool nash = true;
    for (AgentId i = 0; i < g.n && nash; ++i) {
      const std::uint64_t others = mask & ~g.agent_bit[i];
      double exposed = 0.0;
      for (SetId k : incident[i])
        if ((others & g.set_mask[k]) == 0) exposed += inst.set(k).weight;
      const bool on = mask & g.agent_bit[i];
      nash = on ? !(exposed < inst.cost(i) - kCostTolerance) : !(inst.cost(i) < exposed - kCostTolerance);
    }
    if (!nash) continue;
    out.equilibria.push_back(g.state(mask));
    out.costs.push_back(social_cost(inst, out.equilibria.back()));
  }

  if (!out.costs.empty()) {
    out.worst_cost = *std::max_element(out.costs.begin(), out.costs.end());
    out.best_cost = *std::min_element(out.costs.begin(), out.costs.end());
  }
  if (out.opt > 0.0) {
    out.poa = out.worst_cost / out.opt;
    out.pos = out.best_cost / out.opt;
  }
  return out;
}

}  // namespace covgame
