#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covgame/advertiser.hpp"
#include "covgame/dynamics.hpp"
#include "covgame/game.hpp"

namespace covgame {

inline constexpr std::size_t kBruteForceMax = 22;

class EnumerationCapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OptResult {
  double cost = 0.0;
  JointState state;
};

/// Exact OPT over all 2^n states; ties go to the lexicographically smallest
/// action vector (off < on, agent 0 most significant).
OptResult brute_force_opt(const CoveringInstance& inst, std::size_t nmax = kBruteForceMax);

struct NashEnumeration {
  std::vector<JointState> equilibria;  // lexicographic order
  std::vector<double> costs;
  double opt = 0.0;
  double poa = 1.0;
  double pos = 1.0;
  double worst_cost = 0.0;
  double best_cost = 0.0;
};

NashEnumeration enumerate_nash(const CoveringInstance& inst, std::size_t nmax = kBruteForceMax);

enum class Model { psa, ltd, br_only };

const char* to_string(Model m);
Model parse_model(const std::string& s);

struct ExperimentConfig {
  Model model = Model::psa;
  JointState s_ad;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  PsaConfig psa;  // schedule.seed is replaced per trial
  LtdConfig ltd;  // seed is replaced per trial
  ScheduleConfig br;
  // OPT / PoA / PoS are enumerated when n <= this.
  std::size_t opt_nmax = 20;
};

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double cost_ad = 0.0;
  double cost_s1 = 0.0;
  double cost_s2 = 0.0;
  double w_fbad = 0.0;
  double c_L = 0.0;
  std::size_t ron = 0;
  std::size_t fr = 0;
  std::size_t steps_p1 = 0;
  std::size_t steps_p2 = 0;
  bool invariants_ok = true;
  // Not part of the CSV.
  double c_ron = 0.0;
  double w_fr = 0.0;
  bool f_bad_empty = true;
  std::optional<bool> event_E;
  std::string violation;
};

struct TrialReport {
  std::vector<TrialRow> rows;
  std::size_t n = 0;
  double cost_ad = 0.0;
  double mean_cost_s2 = 0.0;
  double stderr_cost_s2 = 0.0;
  double mean_ratio_ad = 0.0;
  double stderr_ratio_ad = 0.0;
  std::optional<double> opt;
  std::optional<double> mean_ratio_opt;
  std::optional<double> poa;
  std::optional<double> pos;
  std::size_t violations = 0;
  std::optional<double> event_E_fraction;
};

/// Runs every trial (fanned out over cfg.workers threads) and aggregates in trial order.
TrialReport run_experiment(const CoveringInstance& inst, const ExperimentConfig& cfg);

/// One trial with seed trial_seed(cfg.master_seed, trial).
TrialRow run_trial(const CoveringInstance& inst, const ExperimentConfig& cfg, std::size_t trial);

/// One run of cfg.model driven directly by `seed`; optionally hands back the trace.
TrialRow run_seeded(const CoveringInstance& inst, const ExperimentConfig& cfg, std::uint64_t seed,
                    DynamicsTrace* trace = nullptr);

inline constexpr const char* kCsvHeader =
    "trial,seed,cost_ad,cost_s1,cost_s2,w_fbad,c_L,ron,fr,steps_p1,steps_p2,invariants_ok";

void write_csv(std::ostream& os, const TrialReport& report);
void write_summary(std::ostream& os, const TrialReport& report, const ExperimentConfig& cfg);
std::string summary_json(const TrialReport& report, const ExperimentConfig& cfg);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanStderr mean_stderr(const std::vector<double>& xs);

// Binomial tail scan of S(a, c, d) = sum_{i=0}^{floor c} d C(d,i) (1-a)^(d-i) a^i.

double appendix_sum(double a, double c, std::uint64_t d);

struct AppendixRow {
  double a = 0.0;
  double c = 0.0;
  std::uint64_t d_min = 0;
  std::uint64_t d_max = 0;
  std::uint64_t argmax_d = 0;
  double max_ratio = 0.0;  // max over d of S / ceil(c)
  bool finite = true;
  bool interior = false;            // argmax_d < d_max
  bool decreasing_after_peak = false;
};

std::vector<AppendixRow> check_appendix_bound(const std::vector<double>& a_list, const std::vector<double>& c_list,
                                              std::uint64_t d_max);

}  // namespace covgame
