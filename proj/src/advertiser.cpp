#include "covgame/advertiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covgame {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::lp_rounding: return "lp-rounding";
    case Provenance::star_greedy: return "star-greedy";
    case Provenance::custom: return "custom";
  }
  return "?";
}

AdStrategy round_lp(const CoveringInstance& inst, const LpSolution& lp) {
  if (lp.status != LpStatus::optimal) throw std::invalid_argument("round_lp needs an optimal LP solution");
  if (lp.x.size() != inst.num_agents()) throw DimensionError("LP solution length does not match the instance");
  const std::size_t f_max = compute_stats(inst).f_max;
  JointState s(inst.num_agents());
  if (f_max > 0) {
    const double threshold = 1.0 / static_cast<double>(f_max) - 1e-9;
    for (AgentId i = 0; i < s.size(); ++i)
      if (lp.x[i] >= threshold) s[i] = Action::on;
  }
  return make_ad_strategy(inst, std::move(s), Provenance::lp_rounding);
}

JointState repair_to_full_cover(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  JointState out = s;
  for (SetId k = 0; k < inst.num_sets(); ++k) {
    const auto& members = inst.set(k).members;
    if (std::any_of(members.begin(), members.end(), [&](AgentId j) { return out.is_on(j); })) continue;
    // Members are ascending, so the first strict minimum is the lowest id.
    AgentId pick = members.front();
    for (AgentId j : members)
      if (inst.cost(j) < inst.cost(pick)) pick = j;
    out[pick] = Action::on;
  }
  return out;
}

namespace {

std::vector<std::uint32_t> on_counts(const CoveringInstance& inst, const JointState& s) {
  std::vector<std::uint32_t> counts(inst.num_sets(), 0);
  for (AgentId i = 0; i < s.size(); ++i)
    if (s.is_on(i))
      for (SetId k : inst.incident(i)) ++counts[k];
  return counts;
}

std::size_t unique_cover_count(const CoveringInstance& inst, const std::vector<std::uint32_t>& counts,
                               AgentId i) {
  std::size_t c = 0;
  for (SetId k : inst.incident(i))
    if (counts[k] == 1) ++c;
  return c;
}

}  // namespace

std::optional<std::size_t> delta1_star(const CoveringInstance& inst, const JointState& s) {
  check_dimensions(inst, s);
  const auto counts = on_counts(inst, s);
  std::optional<std::size_t> best;
  for (AgentId i = 0; i < s.size(); ++i) {
    if (!s.is_on(i)) continue;
    const std::size_t c = unique_cover_count(inst, counts, i);
    if (!best || c < *best) best = c;
  }
  return best;
}

AdStrategy make_ad_strategy(const CoveringInstance& inst, JointState s, Provenance provenance) {
  check_dimensions(inst, s);
  AdStrategy ad;
  ad.delta1_star = delta1_star(inst, s);
  ad.f_r_weight = weight_of(inst, uncovered_sets(inst, s));
  ad.state = std::move(s);
  ad.provenance = provenance;
  return ad;
}

std::size_t star_K(const CoveringInstance& inst) {
  const auto st = compute_stats(inst);
  if (!st.w_min) return 1;
  const double ratio = std::floor(st.c_max / *st.w_min);
  return ratio < 1.0 ? 1 : static_cast<std::size_t>(ratio);
}

double default_star_B(double alpha, std::size_t f_max, std::size_t K) {
  const double beta = std::pow(alpha, static_cast<double>(f_max));
  return 4.0 / -std::log1p(-beta) * (1.0 + 2.0 * static_cast<double>(K));
}

StarCheck check_star_condition(const CoveringInstance& inst, const AdStrategy& ad, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  check_dimensions(inst, ad.state);
  const auto st = compute_stats(inst);
  const double n = static_cast<double>(inst.num_agents());

  StarCheck out;
  out.K = star_K(inst);
  out.beta = std::pow(alpha, static_cast<double>(st.f_max));
  out.bound = n > 0 ? 1.0 / (n * n) : 1.0;

  if (st.f_max <= 1 || st.delta2 == 0) {
    out.holds = true;
    out.vacuous = true;
    out.warning = "f_max = 1 or Delta_2 = 0: condition holds vacuously";
    out.max_violation = -out.bound;
    return out;
  }

  const auto d1 = delta1_star(inst, ad.state);
  const double K = static_cast<double>(out.K);
  const double log_keep = std::log1p(-out.beta);  // ln(1 - beta) < 0
  out.x_hat = K / -log_keep;
  if (!d1) {
    out.x_min = std::numeric_limits<double>::infinity();
    out.max_lhs = 0.0;
  } else {
    out.x_min = static_cast<double>(*d1) / (static_cast<double>(st.delta2) * static_cast<double>(st.f_max - 1));
    // ln of K x^K (1-beta)^(x-K); the left side is unimodal with its peak at x_hat.
    auto log_lhs = [&](double x) {
      if (x <= 0.0) return -std::numeric_limits<double>::infinity();
      return std::log(K) + K * std::log(x) + (x - K) * log_keep;
    };
    double peak = log_lhs(out.x_min);
    if (out.x_hat > out.x_min) peak = std::max(peak, log_lhs(out.x_hat));
    out.max_lhs = std::exp(peak);
  }
  out.max_violation = out.max_lhs - out.bound;
  out.holds = out.max_lhs <= out.bound;
  return out;
}

StarGreedyResult build_star_greedy(const CoveringInstance& inst, const AdStrategy& base, double alpha,
                                   double B) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  check_dimensions(inst, base.state);
  const auto st = compute_stats(inst);
  StarGreedyResult out;
  out.B = B > 0.0 ? B : default_star_B(alpha, std::max<std::size_t>(st.f_max, 1), star_K(inst));
  const double n = static_cast<double>(inst.num_agents());
  out.threshold = out.B * static_cast<double>(st.delta2) * (n > 1 ? std::log(n) : 0.0);

  JointState s = base.state;
  auto counts = on_counts(inst, s);
  for (;;) {
    std::optional<AgentId> pick;
    std::size_t pick_count = 0;
    for (AgentId i = 0; i < s.size(); ++i) {
      if (!s.is_on(i)) continue;
      const std::size_t c = unique_cover_count(inst, counts, i);
      if (static_cast<double>(c) >= out.threshold) continue;
      if (!pick || c < pick_count) {
        pick = i;
        pick_count = c;
      }
    }
    if (!pick) break;
    s[*pick] = Action::off;
    for (SetId k : inst.incident(*pick)) --counts[k];
    out.turned_off.push_back(*pick);
  }

  if (s.count_on() == 0 && base.state.count_on() > 0)
    out.warning = "every agent was switched off; the instance is too small for this B";
  out.strategy = make_ad_strategy(inst, std::move(s), Provenance::star_greedy);
  out.check = check_star_condition(inst, out.strategy, alpha);
  return out;
}

}  // namespace covgame
