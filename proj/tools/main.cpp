// covgame: command-line front end for the covering-game toolkit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covgame/advertiser.hpp"
#include "covgame/dynamics.hpp"
#include "covgame/format.hpp"
#include "covgame/game.hpp"
#include "covgame/harness.hpp"
#include "covgame/instances.hpp"
#include "covgame/packing.hpp"

using namespace covgame;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
};

// Raised for problems the user can fix by changing the command line or inputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

// Key/value report rendered as "key,value" lines or a JSON object.
std::string render(const Globals& g, const ordered_json& doc) {
  if (g.format == "json") return doc.dump(2) + "\n";
  std::ostringstream os;
  for (const auto& [key, value] : doc.items()) {
    os << key << ',';
    if (value.is_number_float()) os << format_double(value.get<double>());
    else if (value.is_string()) os << value.get<std::string>();
    else if (value.is_null()) os << "";
    else os << value.dump();
    os << '\n';
  }
  return os.str();
}

JointState read_ad(const std::string& arg, std::size_t n) {
  JointState s;
  if (std::regex_match(arg, std::regex("[01]+")) && !std::filesystem::exists(arg)) {
    s = JointState::from_bits(arg);
  } else {
    s = load_state(arg);
  }
  if (s.size() != n)
    throw UsageError("advertised state has " + std::to_string(s.size()) + " agents, instance has " + std::to_string(n));
  return s;
}

// Default advertisement: rounded LP solution, repaired to a full cover.
JointState default_ad(const CoveringInstance& inst) {
  const auto lp = solve_lp_relaxation(inst);
  return repair_to_full_cover(inst, round_lp(inst, lp).state);
}

ordered_json stats_doc(const CoveringInstance& inst) {
  const auto st = compute_stats(inst);
  ordered_json j;
  j["n"] = inst.num_agents();
  j["m"] = inst.num_sets();
  j["f_max"] = st.f_max;
  j["delta1"] = st.delta1;
  j["delta2"] = st.delta2;
  j["c_max"] = st.c_max;
  j["c_min"] = st.c_min;
  j["w_max"] = st.w_max ? ordered_json(*st.w_max) : ordered_json(nullptr);
  j["w_min"] = st.w_min ? ordered_json(*st.w_min) : ordered_json(nullptr);
  j["total_cost"] = inst.total_cost();
  j["total_weight"] = inst.total_weight();
  return j;
}

ordered_json star_doc(const StarCheck& c) {
  ordered_json j;
  j["holds"] = c.holds;
  j["vacuous"] = c.vacuous;
  j["K"] = c.K;
  j["beta"] = c.beta;
  j["x_min"] = c.x_min;
  j["x_hat"] = c.x_hat;
  j["max_lhs"] = c.max_lhs;
  j["bound"] = c.bound;
  j["max_violation"] = c.max_violation;
  if (!c.warning.empty()) j["warning"] = c.warning;
  return j;
}

ordered_json row_doc(const TrialRow& r, const DynamicsTrace& trace) {
  ordered_json j;
  j["seed"] = r.seed;
  j["cost_ad"] = r.cost_ad;
  j["cost_s1"] = r.cost_s1;
  j["cost_s2"] = r.cost_s2;
  j["w_fbad"] = r.w_fbad;
  j["c_L"] = r.c_L;
  j["ron"] = r.ron;
  j["fr"] = r.fr;
  j["steps_p1"] = r.steps_p1;
  j["steps_p2"] = r.steps_p2;
  j["s_prime"] = trace.s_prime.to_bits();
  j["s_double_prime"] = trace.s_double_prime.to_bits();
  if (r.event_E) j["event_E"] = *r.event_E;
  j["invariants_ok"] = r.invariants_ok;
  if (!r.violation.empty()) j["violation"] = r.violation;
  return j;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("not a number list: " + s);
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covering games with an advertiser: generators, oracles, dynamics and experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--out", g.out, "Write the primary output here instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.fallthrough();

  std::string in_path, ad_arg;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string family;
  GeneratorSpec spec;
  gen->add_option("family", family, "star | poa-bipartite | random-uniform-hypergraph | grid-sensor | path | cycle")
      ->required();
  gen->add_option("--n", spec.n, "Number of agents");
  gen->add_option("--c", spec.c, "Uniform agent cost");
  gen->add_option("--w", spec.w, "Uniform set weight");
  gen->add_option("--k", spec.k, "Set size (random-uniform)");
  gen->add_option("--m", spec.m, "Number of sets (random-uniform)");
  gen->add_option("--cost-lo", spec.cost_range.lo);
  gen->add_option("--cost-hi", spec.cost_range.hi);
  gen->add_option("--w-lo", spec.weight_range.lo);
  gen->add_option("--w-hi", spec.weight_range.hi);
  gen->add_option("--rows", spec.rows);
  gen->add_option("--cols", spec.cols);
  gen->add_option("--radius", spec.radius);

  auto* stats = app.add_subcommand("stats", "Print instance statistics");
  stats->add_option("--in", in_path, "Instance file")->required();

  auto* opt = app.add_subcommand("opt", "Exact social optimum by enumeration");
  std::size_t nmax = kBruteForceMax;
  opt->add_option("--in", in_path, "Instance file")->required();

  auto* nash = app.add_subcommand("nash", "Enumerate pure Nash equilibria, PoA and PoS");
  nash->add_option("--in", in_path, "Instance file")->required();
  bool list_equilibria = false;
  nash->add_flag("--list", list_equilibria, "Also list every equilibrium");

  auto* adv = app.add_subcommand("advertise", "Build an advertising strategy");
  std::string method;
  double alpha = 0.5, B = 0.0;
  bool repair = false;
  adv->add_option("method", method, "lp | star-greedy")->required()->check(CLI::IsMember({"lp", "star-greedy"}));
  adv->add_option("--in", in_path, "Instance file")->required();
  adv->add_option("--alpha", alpha, "Receptiveness (star-greedy)");
  adv->add_option("--B", B, "Greedy constant; 0 selects the default");
  adv->add_flag("--repair", repair, "Turn on agents until every set is covered");

  auto* star = app.add_subcommand("check-star", "Evaluate condition (*) for an advertised state");
  star->add_option("--in", in_path, "Instance file")->required();
  star->add_option("--ad", ad_arg, "State file or bit string")->required();
  star->add_option("--alpha", alpha, "Receptiveness")->required();

  auto* run = app.add_subcommand("run", "Run one dynamics trial");
  std::string model_name;
  std::string trace_path, schedule = "random-permutation-sweeps", commit = "myopic-compare";
  double beta = 0.5;
  std::optional<std::uint64_t> t_star, max_steps;
  run->add_option("model", model_name, "psa | ltd | br")->required()->check(CLI::IsMember({"psa", "ltd", "br"}));
  run->add_option("--in", in_path, "Instance file")->required();
  run->add_option("--ad", ad_arg, "State file or bit string; default is the repaired LP rounding");
  run->add_option("--alpha", alpha, "PSA receptiveness");
  run->add_option("--beta", beta, "LTD follow probability");
  run->add_option("--t-star", t_star, "LTD horizon");
  run->add_option("--commit-policy", commit)->check(CLI::IsMember({"myopic-compare", "always-best-response", "bernoulli-p"}));
  run->add_option("--schedule", schedule)->check(CLI::IsMember({"uniform-random", "random-permutation-sweeps", "round-robin"}));
  run->add_option("--max-steps", max_steps);
  run->add_option("--trace", trace_path, "Write the update trace as CSV");

  auto* exp = app.add_subcommand("experiment", "Monte-Carlo experiment; CSV to --out or stdout");
  std::size_t trials = 100, workers = 1, opt_nmax = 20;
  std::string summary_path;
  model_name = "psa";
  exp->add_option("--model", model_name)->check(CLI::IsMember({"psa", "ltd", "br"}))->capture_default_str();
  exp->add_option("--in", in_path, "Instance file")->required();
  exp->add_option("--ad", ad_arg, "State file or bit string; default is the repaired LP rounding");
  exp->add_option("--alpha", alpha);
  exp->add_option("--beta", beta);
  exp->add_option("--t-star", t_star);
  exp->add_option("--commit-policy", commit)->check(CLI::IsMember({"myopic-compare", "always-best-response", "bernoulli-p"}));
  exp->add_option("--schedule", schedule)->check(CLI::IsMember({"uniform-random", "random-permutation-sweeps", "round-robin"}));
  exp->add_option("--max-steps", max_steps);
  exp->add_option("--trials", trials)->check(CLI::PositiveNumber);
  exp->add_option("--workers", workers)->check(CLI::PositiveNumber);
  exp->add_option("--opt-nmax", opt_nmax, "Enumerate OPT, PoA and PoS up to this n")->check(CLI::Range(0, 22));
  exp->add_option("--summary", summary_path, "Summary file; default is stderr");

  auto* app_a = app.add_subcommand("check-appendix", "Scan the binomial tail sum S(a, c, d)");
  std::string a_list = "0.3,0.5,0.7", c_list = "0.5,1,2,3,5";
  std::uint64_t d_max = 10000;
  app_a->add_option("--a", a_list)->capture_default_str();
  app_a->add_option("--c", c_list)->capture_default_str();
  app_a->add_option("--d-max", d_max)->capture_default_str();

  auto* pack = app.add_subcommand("pack-check", "Compare covering and packing equilibria by enumeration");
  pack->add_option("--in", in_path, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*gen) {
      spec.family = parse_family(family);
      spec.seed = g.seed;
      emit(g, serialize_instance(generate(spec)));
      return 0;
    }

    if (*app_a) {
      const auto rows = check_appendix_bound(parse_list(a_list), parse_list(c_list), d_max);
      bool ok = true;
      std::ostringstream os;
      if (g.format == "json") {
        auto arr = ordered_json::array();
        for (const auto& r : rows)
          arr.push_back({{"a", r.a}, {"c", r.c}, {"d_min", r.d_min}, {"d_max", r.d_max}, {"argmax_d", r.argmax_d},
                         {"max_ratio", r.max_ratio}, {"finite", r.finite}, {"interior", r.interior},
                         {"decreasing_after_peak", r.decreasing_after_peak}});
        os << arr.dump(2) << '\n';
      } else {
        os << "a,c,d_min,d_max,argmax_d,max_ratio,finite,interior,decreasing_after_peak\n";
        for (const auto& r : rows)
          os << format_double(r.a) << ',' << format_double(r.c) << ',' << r.d_min << ',' << r.d_max << ','
             << r.argmax_d << ',' << format_double(r.max_ratio) << ',' << r.finite << ',' << r.interior << ','
             << r.decreasing_after_peak << '\n';
      }
      for (const auto& r : rows) ok = ok && r.finite && r.interior && r.decreasing_after_peak;
      emit(g, os.str());
      return ok ? 0 : 1;
    }
    const CoveringInstance inst = load_instance(in_path);

    if (*stats) {
      emit(g, render(g, stats_doc(inst)));
      return 0;
    }
    if (*opt) {
      const auto r = brute_force_opt(inst, nmax);
      ordered_json j;
      j["n"] = inst.num_agents();
      j["opt"] = r.cost;
      j["state"] = r.state.to_bits();
      emit(g, render(g, j));
      return 0;
    }
    if (*nash) {
      const auto r = enumerate_nash(inst);
      ordered_json j;
      j["n"] = inst.num_agents();
      j["equilibria"] = r.equilibria.size();
      j["opt"] = r.opt;
      j["worst_cost"] = r.worst_cost;
      j["best_cost"] = r.best_cost;
      j["poa"] = r.poa;
      j["pos"] = r.pos;
      if (list_equilibria) {
        if (g.format == "json") {
          auto arr = ordered_json::array();
          for (std::size_t k = 0; k < r.equilibria.size(); ++k)
            arr.push_back({{"state", r.equilibria[k].to_bits()}, {"cost", r.costs[k]}});
          j["list"] = arr;
        } else {
          std::string text = render(g, j) + "state,cost\n";
          for (std::size_t k = 0; k < r.equilibria.size(); ++k)
            text += r.equilibria[k].to_bits() + "," + format_double(r.costs[k]) + "\n";
          emit(g, text);
          return 0;
        }
      }
      emit(g, render(g, j));
      return 0;
    }
    if (*adv) {
      AdStrategy ad;
      ordered_json j;
      if (method == "lp") {
        const auto lp = solve_lp_relaxation(inst);
        if (lp.status != LpStatus::optimal)
          throw std::runtime_error(std::string("LP relaxation ended with status ") + to_string(lp.status));
        ad = round_lp(inst, lp);
        j["lp_objective"] = lp.objective;
        j["lp_pivots"] = lp.pivots;
      } else {
        const auto base = make_ad_strategy(inst, default_ad(inst), Provenance::lp_rounding);
        const auto res = build_star_greedy(inst, base, alpha, B);
        ad = res.strategy;
        j["B"] = res.B;
        j["threshold"] = res.threshold;
        j["turned_off"] = res.turned_off.size();
        j["star_holds"] = res.check.holds;
        if (!res.warning.empty()) j["warning"] = res.warning;
      }
      if (repair) ad = make_ad_strategy(inst, repair_to_full_cover(inst, ad.state), ad.provenance);
      j["provenance"] = to_string(ad.provenance);
      j["cost"] = social_cost(inst, ad.state);
      j["on"] = ad.state.count_on();
      j["delta1_star"] = ad.delta1_star ? ordered_json(*ad.delta1_star) : ordered_json(nullptr);
      j["f_r_weight"] = ad.f_r_weight;
      if (g.out.empty()) {
        j["actions"] = ad.state.to_bits();
        std::cout << render(g, j);
      } else {
        write_text_file(g.out, serialize_state(ad.state));
        std::cerr << render(g, j);
      }
      return 0;
    }
    if (*star) {
      const auto ad = make_ad_strategy(inst, read_ad(ad_arg, inst.num_agents()), Provenance::custom);
      emit(g, render(g, star_doc(check_star_condition(inst, ad, alpha))));
      return 0;
    }

    ExperimentConfig cfg;
    cfg.model = parse_model(model_name);
    cfg.s_ad = ad_arg.empty() ? default_ad(inst) : read_ad(ad_arg, inst.num_agents());
    cfg.master_seed = g.seed;
    cfg.psa.alpha = alpha;
    cfg.psa.schedule.policy = parse_schedule_policy(schedule);
    cfg.psa.schedule.max_steps = max_steps;
    cfg.br = cfg.psa.schedule;
    cfg.ltd.beta = beta;
    cfg.ltd.t_star = t_star;
    cfg.ltd.commit_policy = parse_commit_policy(commit);
    cfg.ltd.max_steps = max_steps;

    if (*run) {
      DynamicsTrace trace;
      const auto row = run_seeded(inst, cfg, g.seed, &trace);
      if (!trace_path.empty()) write_text_file(trace_path, format_trace(trace));
      emit(g, render(g, row_doc(row, trace)));
      return row.invariants_ok ? 0 : 1;
    }
    if (*exp) {
      cfg.trials = trials;
      cfg.workers = workers;
      cfg.opt_nmax = opt_nmax;
      const auto report = run_experiment(inst, cfg);
      std::ostringstream csv;
      write_csv(csv, report);
      emit(g, csv.str());
      std::ostringstream summary;
      if (g.format == "json") summary << summary_json(report, cfg);
      else write_summary(summary, report, cfg);
      if (summary_path.empty()) std::cerr << summary.str();
      else write_text_file(summary_path, summary.str());
      return report.violations == 0 ? 0 : 1;
    }
    if (*pack) {
      const auto r = nash_correspondence_check(inst);
      ordered_json j;
      j["n"] = r.n;
      j["all_size_two"] = r.all_size_two;
      j["covering_equilibria"] = r.covering_equilibria;
      j["packing_equilibria"] = r.packing_equilibria;
      j["mismatches"] = r.mismatches.size();
      j["matches"] = r.matches();
      emit(g, render(g, j));
      return r.matches() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
