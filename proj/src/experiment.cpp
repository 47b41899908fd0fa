#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "covgame/format.hpp"
#include "covgame/harness.hpp"
#include "covgame/rng.hpp"

namespace covgame {

const char* to_string(Model m) {
  switch (m) {
    case Model::psa: return "psa";
    case Model::ltd: return "ltd";
    case Model::br_only: return "br";
  }
  return "?";
}

Model parse_model(const std::string& s) {
  if (s == "psa") return Model::psa;
  if (s == "ltd") return Model::ltd;
  if (s == "br" || s == "br-only") return Model::br_only;
  throw std::invalid_argument("unknown model: " + s);
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return out;
}

namespace {

void fail(TrialRow& row, const std::string& why) {
  row.invariants_ok = false;
  if (!row.violation.empty()) row.violation += "; ";
  row.violation += why;
}

void fill_common(TrialRow& row, const CoveringInstance& inst, const DynamicsTrace& trace,
                 const PhaseDiagnostics& d) {
  row.cost_s1 = social_cost(inst, trace.s_prime);
  row.cost_s2 = social_cost(inst, trace.s_double_prime);
  row.w_fbad = d.w_F_bad;
  row.c_L = d.c_L;
  row.ron = d.R_on.size();
  row.fr = d.F_R.size();
  row.c_ron = d.c_R_on;
  row.w_fr = d.w_F_R;
  row.f_bad_empty = d.F_bad.empty();
  row.steps_p1 = trace.events_in_phase(0);
  row.steps_p2 = trace.phase_boundaries.empty() ? 0 : trace.events_in_phase(1);
  if (!trace.converged) fail(row, "step cap reached before convergence");
  if (!potential_monotone_on_best_response(trace)) fail(row, "potential did not strictly decrease on a best-response move");
}

}  // namespace

TrialRow run_trial(const CoveringInstance& inst, const ExperimentConfig& cfg, std::size_t trial) {
  TrialRow row = run_seeded(inst, cfg, trial_seed(cfg.master_seed, trial));
  row.trial = trial;
  return row;
}

TrialRow run_seeded(const CoveringInstance& inst, const ExperimentConfig& cfg, std::uint64_t seed,
                    DynamicsTrace* trace_out) {
  TrialRow row;
  row.seed = seed;
  row.cost_ad = social_cost(inst, cfg.s_ad);

  switch (cfg.model) {
    case Model::psa: {
      PsaConfig pc = cfg.psa;
      pc.schedule.seed = row.seed;
      const auto res = run_psa(inst, cfg.s_ad, pc);
      fill_common(row, inst, res.trace, res.diagnostics);
      if (res.diagnostics.w_F_bad > res.diagnostics.c_L + kCostTolerance) fail(row, "w(F_bad) > c(L)");
      if (res.trace.converged) {
        if (!is_nash_given_pinned(inst, res.trace.s_prime, res.receptive)) fail(row, "phase-1 state is not a constrained Nash equilibrium");
        if (!is_nash(inst, res.trace.s_double_prime)) fail(row, "final state is not a Nash equilibrium");
      }
      if (trace_out) *trace_out = res.trace;
      break;
    }
    case Model::ltd: {
      LtdConfig lc = cfg.ltd;
      lc.seed = row.seed;
      const auto res = run_ltd(inst, cfg.s_ad, lc);
      fill_common(row, inst, res.trace, res.diagnostics);
      row.event_E = res.diagnostics.event_E_holds;
      if (res.trace.converged && !is_nash_given_pinned(inst, res.trace.s_double_prime, res.follower))
        fail(row, "final state is not a Nash equilibrium given the followers");
      if (trace_out) *trace_out = res.trace;
      break;
    }
    case Model::br_only: {
      Rng rng(row.seed);
      JointState start(inst.num_agents());
      for (AgentId i = 0; i < start.size(); ++i) start[i] = rng.bernoulli(0.5) ? Action::on : Action::off;
      ScheduleConfig sc = cfg.br;
      sc.seed = mix64(row.seed);
      auto trace = run_best_response(inst, start, sc);
      trace.s_prime = start;
      const auto d = compute_diagnostics(inst, cfg.s_ad, start);
      fill_common(row, inst, trace, d);
      row.steps_p1 = 0;
      row.steps_p2 = trace.events.size();
      if (trace.converged && !is_nash(inst, trace.s_double_prime)) fail(row, "final state is not a Nash equilibrium");
      if (trace_out) *trace_out = std::move(trace);
      break;
    }
  }
  return row;
}

TrialReport run_experiment(const CoveringInstance& inst, const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trial count must be at least 1");
  check_dimensions(inst, cfg.s_ad);

  TrialReport rep;
  rep.n = inst.num_agents();
  rep.cost_ad = social_cost(inst, cfg.s_ad);
  rep.rows.resize(cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      try {
        rep.rows[t] = run_trial(inst, cfg, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = cfg.trials;
        return;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.trials));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> cost_s2, ratio_ad;
  std::size_t event_hits = 0, event_seen = 0;
  for (const auto& row : rep.rows) {
    cost_s2.push_back(row.cost_s2);
    ratio_ad.push_back(rep.cost_ad > 0.0 ? row.cost_s2 / rep.cost_ad : (row.cost_s2 > 0.0 ? INFINITY : 1.0));
    rep.violations += !row.invariants_ok;
    if (row.event_E) {
      ++event_seen;
      event_hits += *row.event_E;
    }
  }
  const auto c2 = mean_stderr(cost_s2);
  const auto ra = mean_stderr(ratio_ad);
  rep.mean_cost_s2 = c2.mean;
  rep.stderr_cost_s2 = c2.stderr_;
  rep.mean_ratio_ad = ra.mean;
  rep.stderr_ratio_ad = ra.stderr_;
  if (event_seen > 0) rep.event_E_fraction = static_cast<double>(event_hits) / static_cast<double>(event_seen);

  if (inst.num_agents() <= std::min(cfg.opt_nmax, kBruteForceMax)) {
    const auto ne = enumerate_nash(inst, cfg.opt_nmax);
    rep.opt = ne.opt;
    rep.poa = ne.poa;
    rep.pos = ne.pos;
    rep.mean_ratio_opt = ne.opt > 0.0 ? rep.mean_cost_s2 / ne.opt : 1.0;
  }
  return rep;
}

void write_csv(std::ostream& os, const TrialReport& report) {
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << r.trial << ',' << r.seed << ',' << format_double(r.cost_ad) << ',' << format_double(r.cost_s1) << ','
       << format_double(r.cost_s2) << ',' << format_double(r.w_fbad) << ',' << format_double(r.c_L) << ','
       << r.ron << ',' << r.fr << ',' << r.steps_p1 << ',' << r.steps_p2 << ',' << (r.invariants_ok ? 1 : 0)
       << '\n';
  }
}

namespace {

nlohmann::ordered_json summary_doc(const TrialReport& r, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = to_string(cfg.model);
  j["n"] = r.n;
  j["trials"] = r.rows.size();
  j["master_seed"] = cfg.master_seed;
  j["cost_ad"] = r.cost_ad;
  j["mean_cost_s2"] = r.mean_cost_s2;
  j["stderr_cost_s2"] = r.stderr_cost_s2;
  j["mean_ratio_ad"] = r.mean_ratio_ad;
  j["stderr_ratio_ad"] = r.stderr_ratio_ad;
  if (r.opt) j["opt"] = *r.opt;
  if (r.mean_ratio_opt) j["mean_ratio_opt"] = *r.mean_ratio_opt;
  if (r.poa) j["poa"] = *r.poa;
  if (r.pos) j["pos"] = *r.pos;
  if (r.event_E_fraction) j["event_E_fraction"] = *r.event_E_fraction;
  j["violations"] = r.violations;
  return j;
}

}  // namespace

void write_summary(std::ostream& os, const TrialReport& report, const ExperimentConfig& cfg) {
  const auto doc = summary_doc(report, cfg);
  for (const auto& [key, value] : doc.items()) {
    os << key << ": ";
    if (value.is_number_float()) os << format_double(value.get<double>());
    else if (value.is_string()) os << value.get<std::string>();
    else os << value.dump();
    os << '\n';
  }
  for (const auto& row : report.rows)
    if (!row.invariants_ok) os << "violation: trial " << row.trial << " seed " << row.seed << ": " << row.violation << '\n';
}

std::string summary_json(const TrialReport& report, const ExperimentConfig& cfg) {
  return summary_doc(report, cfg).dump(2) + "\n";
}

}  // namespace covgame
