#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "polarsim/experiment.hpp"
#include "polarsim/io.hpp"

using namespace polarsim;
namespace fs = std::filesystem;

namespace {

const char* kTinyExperiment = R"({
  "world": {
    "user_count": 300, "rng_seed": 1, "posting_rate": 0.4,
    "repost_prob": 0.5, "cross_topic_repost_prob": 0.4,
    "cross_topic_arcs_per_user": 1,
    "topics": {
      "a": {"fraction": 0.5, "regime": "broadcast", "hub_exponent": 2.2,
            "target_reciprocity": 0.0, "arcs_per_node": 1},
      "b": {"fraction": 0.5, "regime": "mutual", "target_reciprocity": 0.5,
            "arcs_per_node": 4}
    }
  },
  "arms": [
    {"name": "arm1", "preference": "a"},
    {"name": "arm2", "preference": "b"}
  ],
  "bots_per_arm": 4,
  "t_max": 60,
  "warmup_hours": 48,
  "pcr_bins": 5,
  "replicate_seeds": [3]
})";

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag)
      : path(fs::temp_directory_path() / (std::string("polarsim_exp_") + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(std::initializer_list<const char*> args) {
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>("polarsim"));
  for (const char* a : args) argv.push_back(const_cast<char*>(a));
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("experiment config validation") {
  auto config = ExperimentConfig::from_json_text(kTinyExperiment, ".");
  CHECK(config.bots_per_arm == 4);
  CHECK(config.arms[1].preference == "b");
  config.arms[1].preference = "nope";
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = ExperimentConfig::from_json_text(kTinyExperiment, ".");
  config.replicate_seeds.clear();
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("run, analyze and report agree end to end") {
  TempDir tmp("run");
  const auto config = ExperimentConfig::from_json_text(kTinyExperiment, ".");
  const auto result = run_experiment(config, tmp.path);
  REQUIRE(result.replicates.size() == 1);
  const auto& rep = result.replicates[0];
  CHECK(rep.seed == 3);
  REQUIRE(rep.bots.size() == 8);
  for (const auto& o : rep.bots) {
    CHECK(o.initial_pcr >= 0.0);
    CHECK(o.initial_pcr <= 1.0);
    CHECK(o.pcr.points.size() == 5);
  }
  CHECK(!rep.tests.empty());

  // persisted tree
  CHECK(fs::exists(tmp.path / "config.json"));
  CHECK(fs::exists(tmp.path / "rep_3" / "world" / "users.csv"));
  CHECK(fs::exists(tmp.path / "rep_3" / "world" / "follows.edges"));
  CHECK(fs::exists(tmp.path / "rep_3" / "events.jsonl"));
  CHECK(fs::exists(tmp.path / "rep_3" / "messages.jsonl"));
  CHECK(fs::exists(tmp.path / "rep_3" / "bots" / "followings.csv"));
  CHECK(fs::exists(tmp.path / "rep_3" / "bots" / "exposure_0.jsonl"));

  const auto files = emit_report(result, tmp.path);
  for (const char* f : {"fig3_pcr.csv", "fig4_wordfreq.csv", "fig5_followings.csv",
                        "fig6_structure.csv", "tests.csv", "summary.txt", "manifest.txt"})
    CHECK(fs::exists(tmp.path / f));
  CHECK(files.size() >= 7);

  // offline recompute reproduces every statistic exactly
  const auto again = analyze_run(tmp.path);
  REQUIRE(again.replicates.size() == 1);
  const auto& rep2 = again.replicates[0];
  REQUIRE(rep2.tests.size() == rep.tests.size());
  for (std::size_t i = 0; i < rep.tests.size(); ++i) {
    CHECK(rep2.tests[i].test == rep.tests[i].test);
    CHECK(rep2.tests[i].statistic == rep.tests[i].statistic);
    CHECK(rep2.tests[i].p_value == rep.tests[i].p_value);
  }
  for (std::size_t b = 0; b < rep.bots.size(); ++b) {
    CHECK(rep2.bots[b].initial_pcr == rep.bots[b].initial_pcr);
    CHECK(rep2.bots[b].final_pcr == rep.bots[b].final_pcr);
    CHECK(rep2.bots[b].followings_count == rep.bots[b].followings_count);
    CHECK(rep2.bots[b].net.global_reciprocity == rep.bots[b].net.global_reciprocity);
    CHECK(rep2.bots[b].wordfreq_all.entries == rep.bots[b].wordfreq_all.entries);
  }
  CHECK(again.config_hash == result.config_hash);
}

TEST_CASE("identical seeds give identical runs") {
  TempDir ta("det_a"), tb("det_b");
  const auto config = ExperimentConfig::from_json_text(kTinyExperiment, ".");
  emit_report(run_experiment(config, ta.path), ta.path);
  emit_report(run_experiment(config, tb.path), tb.path);
  CHECK(read_text_file(ta.path / "manifest.txt") == read_text_file(tb.path / "manifest.txt"));
}

TEST_CASE("cli exit codes: 0 ok, 2 config, 3 io") {
  TempDir tmp("cli");
  fs::create_directories(tmp.path);
  const auto cfg = tmp.path / "exp.json";
  write_text_file(cfg, kTinyExperiment);
  const auto bad = tmp.path / "bad.json";
  write_text_file(bad, "{\"user_count\": 0}");
  const auto out = (tmp.path / "out").string();

  CHECK(cli({"--quiet", "run", cfg.string().c_str(), "-o", out.c_str()}) == 0);
  CHECK(fs::exists(tmp.path / "out" / "tests.csv"));
  CHECK(cli({"--quiet", "analyze", out.c_str()}) == 0);
  CHECK(fs::exists(tmp.path / "out" / "analysis" / "tests.csv"));
  CHECK(cli({"--quiet", "report", out.c_str()}) == 0);
  CHECK(cli({"--quiet", "run", bad.string().c_str(), "-o", out.c_str()}) == 2);
  CHECK(cli({"--quiet", "analyze", (tmp.path / "missing").string().c_str()}) == 3);
  CHECK(cli({"--quiet", "nonsense"}) == 2);
}
