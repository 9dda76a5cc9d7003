#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polarsim/bot.hpp"
#include "polarsim/config.hpp"
#include "polarsim/metrics.hpp"
#include "polarsim/stats.hpp"

namespace polarsim {

struct ArmSpec {
  std::string name;
  std::string preference;  // topic name in the world config
};

struct ExperimentConfig {
  WorldConfig world;
  std::vector<ArmSpec> arms;
  unsigned bots_per_arm = 34;
  double subgroup_low = 0.3;   // initial-PCR thresholds for arm-2 subgroups
  double subgroup_high = 0.6;
  std::string classifier_mode = "oracle";  // oracle | linear
  std::string standard_file;               // optional classification standard
  double t_max = 1440.0;
  double warmup_hours = 168.0;
  BotParams bot_params;
  unsigned pcr_bins = 21;
  std::vector<std::uint64_t> replicate_seeds;

  void validate() const;
  static ExperimentConfig load_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::filesystem::path& base_dir);
};

struct BotOutcome {
  BotId bot_id = 0;
  unsigned arm = 0;
  double initial_pcr = 0.0;  // first-wake exposure
  double final_pcr = 0.0;
  int subgroup = -1;  // arm-2 split by initial PCR: 0 high, 1 mid, 2 low
  bool timed_out = false;
  std::size_t followings_count = 0;
  PcrSeries pcr;
  WordFrequencyTable wordfreq_all;
  WordFrequencyTable wordfreq_preferred;
  FollowingsAttributes attrs;
  NetworkReport net;
};

struct StatRow {
  std::string test;       // e.g. "final_pcr_mw"
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method;
  std::vector<std::size_t> n_per_group;
};

struct ReplicateResult {
  std::uint64_t seed = 0;
  std::vector<BotOutcome> bots;
  std::vector<StatRow> tests;
  MaybeCorrelation pooled_in_out_corr_arm1;
  MaybeCorrelation pooled_in_out_corr_arm2;
  bool low_power = false;  // any group below 2 bots
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<ReplicateResult> replicates;
};

// Runs every replicate, persisting raw logs and per-replicate outputs under
// outdir/rep_<seed>/ as it goes.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& outdir);

// Recomputes all metrics and tests from the persisted raw logs of one run
// directory (as produced by run_experiment).
ExperimentResult analyze_run(const std::filesystem::path& rundir);

// Figure-ready CSV tables, summary text and the hashed file manifest.
std::vector<std::string> emit_report(const ExperimentResult& result,
                                     const std::filesystem::path& outdir);

int run_cli(int argc, char** argv);

}  // namespace polarsim
