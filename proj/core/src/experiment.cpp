#include "polarsim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"

#include "polarsim/io.hpp"
#include "polarsim/linear_model.hpp"
#include "polarsim/worldgen.hpp"

namespace polarsim {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  world.validate();
  if (arms.size() < 2) throw ConfigError("arms", "need at least 2 arms");
  for (const auto& a : arms)
    if (world.topic_index(a.preference) < 0)
      throw ConfigError("arms." + a.name, "preference is not a world topic: " + a.preference);
  if (bots_per_arm < 2) throw ConfigError("bots_per_arm", "must be >= 2");
  if (!(subgroup_low > 0.0 && subgroup_low < subgroup_high && subgroup_high < 1.0))
    throw ConfigError("subgroup_thresholds", "must be strictly increasing within (0,1)");
  if (classifier_mode != "oracle" && classifier_mode != "linear")
    throw ConfigError("classifier", "must be 'oracle' or 'linear'");
  if (t_max <= 0.0) throw ConfigError("t_max", "must be > 0");
  if (warmup_hours < 0.0) throw ConfigError("warmup_hours", "must be >= 0");
  if (pcr_bins < 2) throw ConfigError("pcr_bins", "must be >= 2");
  if (replicate_seeds.empty()) throw ConfigError("replicate_seeds", "must be non-empty");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const fs::path& base_dir) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.at("world").is_string())
      c.world = WorldConfig::load_file((base_dir / j["world"].get<std::string>()).string());
    else
      c.world = WorldConfig::from_json_text(j["world"].dump());
    for (const auto& a : j.at("arms"))
      c.arms.push_back({a.at("name").get<std::string>(), a.at("preference").get<std::string>()});
    c.bots_per_arm = j.value("bots_per_arm", c.bots_per_arm);
    if (j.contains("subgroup_thresholds")) {
      c.subgroup_low = j["subgroup_thresholds"].at(0).get<double>();
      c.subgroup_high = j["subgroup_thresholds"].at(1).get<double>();
    }
    c.classifier_mode = j.value("classifier", c.classifier_mode);
    if (j.contains("standard_file"))
      c.standard_file = (base_dir / j["standard_file"].get<std::string>()).string();
    c.t_max = j.value("t_max", c.t_max);
    c.warmup_hours = j.value("warmup_hours", c.warmup_hours);
    c.bot_params.follow_cap = j.value("follow_cap", c.bot_params.follow_cap);
    if (j.contains("idle_range")) {
      c.bot_params.idle_min = j["idle_range"].at(0).get<double>();
      c.bot_params.idle_max = j["idle_range"].at(1).get<double>();
    }
    c.pcr_bins = j.value("pcr_bins", c.pcr_bins);
    c.replicate_seeds = j.value("replicate_seeds", std::vector<std::uint64_t>{1});
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("<file>", std::string("bad or missing key: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open experiment config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), fs::path(path).parent_path());
}

namespace {

std::string config_echo_text(const ExperimentConfig& c) {
  ordered_json j;
  j["version"] = 1;
  j["world"] = ordered_json::parse(c.world.to_json_text());
  ordered_json arms = ordered_json::array();
  for (const auto& a : c.arms) arms.push_back({{"name", a.name}, {"preference", a.preference}});
  j["arms"] = arms;
  j["bots_per_arm"] = c.bots_per_arm;
  j["subgroup_thresholds"] = {c.subgroup_low, c.subgroup_high};
  j["classifier"] = c.classifier_mode;
  j["t_max"] = c.t_max;
  j["warmup_hours"] = c.warmup_hours;
  j["follow_cap"] = c.bot_params.follow_cap;
  j["idle_range"] = {c.bot_params.idle_min, c.bot_params.idle_max};
  j["pcr_bins"] = c.pcr_bins;
  j["replicate_seeds"] = c.replicate_seeds;
  return j.dump(2) + "\n";
}

std::string method_name(PMethod m) {
  switch (m) {
    case PMethod::exact: return "exact";
    case PMethod::normal_approx: return "normal_approx";
    case PMethod::chi_square_approx: return "chi_square_approx";
    case PMethod::t_approx: return "t_approx";
  }
  return "?";
}

StatRow row_from(const std::string& name, const TestResult& t) {
  return {name, t.statistic, t.p_value, method_name(t.method), t.n_per_group};
}

double exposure_pcr(const std::vector<ExposureRecord>& log, std::size_t first_n_records) {
  std::size_t total = 0, pref = 0;
  std::size_t n = std::min(first_n_records, log.size());
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& m : log[i].messages) {
      ++total;
      if (m.verdict == Verdict::preferred) ++pref;
    }
  return total ? static_cast<double>(pref) / static_cast<double>(total) : 0.0;
}

struct ReplicateInputs {
  const World* world;
  std::vector<BotState>* bots;  // ordered arm-major
};

BotOutcome outcome_for(const ExperimentConfig& config, const World& world,
                       const BotState& bot, unsigned arm, const WordsLookup& words) {
  BotOutcome o;
  o.bot_id = bot.id;
  o.arm = arm;
  o.timed_out = bot.timed_out;
  o.followings_count = bot.followings.size();
  o.initial_pcr = exposure_pcr(bot.exposure_log, 1);
  o.final_pcr = exposure_pcr(bot.exposure_log, bot.exposure_log.size());
  if (arm == 1) {
    if (o.initial_pcr >= config.subgroup_high)
      o.subgroup = 0;
    else if (o.initial_pcr >= config.subgroup_low)
      o.subgroup = 1;
    else
      o.subgroup = 2;
  }
  if (!bot.exposure_log.empty()) {
    o.pcr = pcr_series(bot.exposure_log, bot.preference, config.pcr_bins);
    o.wordfreq_all = word_frequencies_lookup(bot.exposure_log, WordScope::all, words);
    o.wordfreq_preferred =
        word_frequencies_lookup(bot.exposure_log, WordScope::preferred_only, words);
  }
  o.attrs = followings_attributes(world, bot);
  o.net = network_report(extract_personal_network(world, bot).graph);
  return o;
}

void compute_tests(const ExperimentConfig& config, const World& world,
                   const std::vector<BotState>& bots, ReplicateResult& rep) {
  auto collect = [&](unsigned arm, auto getter) {
    std::vector<double> v;
    for (const auto& o : rep.bots)
      if (o.arm == arm) v.push_back(getter(o));
    return v;
  };

  const auto init1 = collect(0, [](const BotOutcome& o) { return o.initial_pcr; });
  const auto init2 = collect(1, [](const BotOutcome& o) { return o.initial_pcr; });
  const auto fin1 = collect(0, [](const BotOutcome& o) { return o.final_pcr; });
  const auto fin2 = collect(1, [](const BotOutcome& o) { return o.final_pcr; });
  rep.tests.push_back(row_from("initial_pcr_mw", mann_whitney_u(init1, init2)));
  rep.tests.push_back(row_from("final_pcr_mw", mann_whitney_u(fin1, fin2)));

  // arm-2 subgroups by initial PCR
  std::vector<std::vector<double>> groups(3);
  for (const auto& o : rep.bots)
    if (o.arm == 1) groups[static_cast<std::size_t>(o.subgroup)].push_back(o.final_pcr);
  std::vector<std::vector<double>> present;
  for (auto& g : groups) {
    if (!g.empty()) present.push_back(g);
    if (g.size() < 2) rep.low_power = true;
  }
  if (present.size() >= 2) {
    const auto kw = kruskal_wallis(present, true);
    StatRow row = row_from("subgroup_kw", kw.omnibus);
    rep.tests.push_back(row);
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = i + 1; j < present.size(); ++j)
        rep.tests.push_back({"subgroup_posthoc_" + std::to_string(i) + "_" + std::to_string(j),
                             0.0, kw.pairwise_p[i][j], "bonferroni",
                             {present[i].size(), present[j].size()}});
  } else {
    rep.tests.push_back({"subgroup_kw", 0.0, 1.0, "skipped_low_power", {}});
  }

  const auto clus1 = collect(0, [](const BotOutcome& o) { return o.net.mean_directed_clustering; });
  const auto clus2 = collect(1, [](const BotOutcome& o) { return o.net.mean_directed_clustering; });
  rep.tests.push_back(row_from("clustering_mw", mann_whitney_u(clus1, clus2)));

  const auto rec1 = collect(0, [](const BotOutcome& o) { return o.net.global_reciprocity; });
  const auto rec2 = collect(1, [](const BotOutcome& o) { return o.net.global_reciprocity; });
  rep.tests.push_back(row_from("reciprocity_mw", mann_whitney_u(rec1, rec2)));

  // pooled in/out-degree correlation per arm over personal-network nodes
  for (unsigned arm = 0; arm < 2; ++arm) {
    std::vector<double> ins, outs;
    for (std::size_t b = 0; b < bots.size(); ++b) {
      const unsigned bot_arm = static_cast<unsigned>(b) / config.bots_per_arm;
      if (bot_arm != arm) continue;
      const auto pn = extract_personal_network(world, bots[b]);
      for (NodeId u = 0; u < pn.graph.node_count(); ++u) {
        ins.push_back(static_cast<double>(pn.graph.in_degree(u)));
        outs.push_back(static_cast<double>(pn.graph.out_degree(u)));
      }
    }
    MaybeCorrelation corr{0.0, true};
    double p = 1.0;
    if (ins.size() >= 3) {
      const auto r = pearson(ins, outs);
      corr = {r.r, r.degenerate};
      p = r.p_value;
    }
    (arm == 0 ? rep.pooled_in_out_corr_arm1 : rep.pooled_in_out_corr_arm2) = corr;
    rep.tests.push_back({"pooled_in_out_corr_arm" + std::to_string(arm + 1), corr.value, p,
                         corr.degenerate ? "degenerate" : "t_approx",
                         {ins.size()}});
  }
}

std::unique_ptr<Classifier> make_classifier(const ExperimentConfig& config,
                                            const World& world) {
  ClassificationStandard std_;
  if (!config.standard_file.empty())
    std_ = ClassificationStandard::load_file(config.standard_file);
  CompiledStandard compiled(std_, world);
  if (config.classifier_mode == "linear") {
    // Train on a labeled sample of the world's own vocabulary draws.
    std::vector<std::pair<std::vector<std::string>, std::string>> corpus;
    Rng rng(derive_seed(world.config.rng_seed, 0xC1A55));
    for (TopicId t = 0; t < world.topic_names.size(); ++t) {
      ZipfSampler sampler(world.config.topics[t].zipf.vocab_size,
                          world.config.topics[t].zipf.zipf_exponent);
      for (int i = 0; i < 400; ++i) {
        std::vector<std::string> tokens;
        const auto len = static_cast<std::size_t>(uniform_int(
            rng, world.config.min_message_length, world.config.max_message_length));
        for (std::size_t k = 0; k < len; ++k)
          tokens.push_back(world.vocab.word_string(world.vocab.word(t, sampler.draw(rng))));
        corpus.emplace_back(std::move(tokens), world.topic_names[t]);
      }
    }
    TrainParams params;
    params.seed = world.config.rng_seed;
    return std::make_unique<LinearClassifier>(train_linear(corpus, params), compiled);
  }
  return std::make_unique<OracleClassifier>(compiled);
}

ReplicateResult run_replicate(const ExperimentConfig& config, std::uint64_t seed,
                              const fs::path& repdir) {
  WorldConfig wc = config.world;
  wc.rng_seed = seed;
  World world = generate_world(wc);
  Engine engine(world);
  const auto classifier = make_classifier(config, world);

  engine.step_until(config.warmup_hours);
  const double t_end = config.warmup_hours + config.t_max;

  std::vector<BotState> bots;
  std::vector<Rng> bot_rngs;
  std::vector<TopicId> bot_pref;
  for (unsigned a = 0; a < config.arms.size(); ++a) {
    const TopicId pref = world.topic_id(config.arms[a].preference);
    std::vector<UserId> pool;
    for (const auto& u : world.users)
      if (u.topic == pref) pool.push_back(u.id);
    for (unsigned i = 0; i < config.bots_per_arm; ++i) {
      const BotId id = a * config.bots_per_arm + i;
      bot_rngs.emplace_back(derive_seed(seed, 1000 + id));
      bots.push_back(init_bot(id, pref, pool, bot_rngs.back(), config.bot_params,
                              world.clock));
      bot_pref.push_back(pref);
    }
  }

  // single logical clock: earliest wake first, ties by bot id
  while (true) {
    std::size_t next = bots.size();
    for (std::size_t b = 0; b < bots.size(); ++b) {
      if (bots[b].phase != BotPhase::running) continue;
      if (next == bots.size() || bots[b].next_wake < bots[next].next_wake) next = b;
    }
    if (next == bots.size()) break;
    BotState& bot = bots[next];
    if (bot.next_wake > t_end) {
      bot.phase = BotPhase::finished;
      bot.timed_out = true;
      continue;
    }
    engine.step_until(bot.next_wake);
    wake(bot, world, *classifier, bot_rngs[next]);
  }

  // persist raw logs
  fs::create_directories(repdir / "bots");
  save_world(world, repdir / "world");
  write_event_log(engine.event_log(), seed, repdir / "events.jsonl");
  std::set<MessageId> exposed;
  for (const auto& bot : bots)
    for (const auto& rec : bot.exposure_log)
      for (const auto& m : rec.messages) {
        exposed.insert(m.id);
        exposed.insert(world.messages.get(m.id).words_ref);
      }
  write_messages_jsonl(world, std::vector<MessageId>(exposed.begin(), exposed.end()), seed,
                       repdir / "messages.jsonl");
  for (const auto& bot : bots)
    write_exposure_log(bot, seed, repdir / "bots" / ("exposure_" + std::to_string(bot.id) + ".jsonl"));
  write_followings_csv(bots, repdir / "bots" / "followings.csv");

  ReplicateResult rep;
  rep.seed = seed;
  const WordsLookup words = [&world](MessageId id) -> const std::vector<WordId>& {
    return world.messages.words(id);
  };
  for (std::size_t b = 0; b < bots.size(); ++b)
    rep.bots.push_back(outcome_for(config, world, bots[b],
                                   static_cast<unsigned>(b) / config.bots_per_arm, words));
  compute_tests(config, world, bots, rep);
  return rep;
}

void write_csv(const fs::path& path, const std::string& content) {
  write_text_file(path, content);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const fs::path& outdir) {
  config.validate();
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IoError(outdir.string(), "cannot create output directory");
  {  // writability probe
    std::ofstream probe(outdir / ".write_probe");
    if (!probe) throw IoError(outdir.string(), "output directory is not writable");
  }
  fs::remove(outdir / ".write_probe");

  ExperimentResult result;
  result.config = config;
  const std::string echo = config_echo_text(config);
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(echo)));
  result.config_hash = hash;
  write_text_file(outdir / "config.json", echo);

  for (std::uint64_t seed : config.replicate_seeds)
    result.replicates.push_back(
        run_replicate(config, seed, outdir / ("rep_" + std::to_string(seed))));
  return result;
}

std::vector<std::string> emit_report(const ExperimentResult& result, const fs::path& outdir) {
  fs::create_directories(outdir);
  std::vector<std::string> files;
  const auto& config = result.config;

  auto arm_name = [&](unsigned a) {
    return a < config.arms.size() ? config.arms[a].name : "arm" + std::to_string(a + 1);
  };

  {
    std::ostringstream os;
    os << "rep_seed,arm,bot_id,subgroup,t,pcr\n";
    for (const auto& rep : result.replicates)
      for (const auto& o : rep.bots)
        for (const auto& p : o.pcr.points)
          os << rep.seed << ',' << arm_name(o.arm) << ',' << o.bot_id << ',' << o.subgroup
             << ',' << format_double(p.t) << ',' << format_double(p.pcr) << "\n";
    write_csv(outdir / "fig3_pcr.csv", os.str());
    files.push_back("fig3_pcr.csv");
  }
  {
    std::ostringstream os;
    os << "rep_seed,arm,bot_id,initial_pcr,final_pcr,subgroup,followings,timed_out\n";
    for (const auto& rep : result.replicates)
      for (const auto& o : rep.bots)
        os << rep.seed << ',' << arm_name(o.arm) << ',' << o.bot_id << ','
           << format_double(o.initial_pcr) << ',' << format_double(o.final_pcr) << ','
           << o.subgroup << ',' << o.followings_count << ',' << (o.timed_out ? 1 : 0) << "\n";
    write_csv(outdir / "pcr_summary.csv", os.str());
    files.push_back("pcr_summary.csv");
  }
  {
    // top-10 preferred-content words per bot plus the pooled per-arm
    // inverse CDF of word frequencies (log-log plot ready)
    std::ostringstream os;
    os << "rep_seed,arm,bot_id,rank,word_id,frequency\n";
    for (const auto& rep : result.replicates)
      for (const auto& o : rep.bots) {
        const auto top = o.wordfreq_preferred.top_k(10);
        for (std::size_t r = 0; r < top.size(); ++r)
          os << rep.seed << ',' << arm_name(o.arm) << ',' << o.bot_id << ',' << (r + 1) << ','
             << top[r].first << ',' << format_double(top[r].second) << "\n";
      }
    write_csv(outdir / "fig4_wordfreq.csv", os.str());
    files.push_back("fig4_wordfreq.csv");

    std::ostringstream tail;
    tail << "rep_seed,arm,frequency,p_ge\n";
    for (const auto& rep : result.replicates) {
      for (unsigned a = 0; a < config.arms.size(); ++a) {
        std::vector<double> freqs;
        for (const auto& o : rep.bots)
          if (o.arm == a)
            for (const auto& [w, f] : o.wordfreq_preferred.entries) freqs.push_back(f);
        std::sort(freqs.begin(), freqs.end());
        const double n = static_cast<double>(freqs.size());
        for (std::size_t i = 0; i < freqs.size();) {
          tail << rep.seed << ',' << arm_name(a) << ',' << format_double(freqs[i]) << ','
               << format_double(static_cast<double>(freqs.size() - i) / n) << "\n";
          const double v = freqs[i];
          while (i < freqs.size() && freqs[i] == v) ++i;
        }
      }
    }
    write_csv(outdir / "fig4_wordfreq_tail.csv", tail.str());
    files.push_back("fig4_wordfreq_tail.csv");
  }
  {
    std::ostringstream os;
    os << "rep_seed,arm,bot_id,same_preference_fraction,mean_followings_of_followings,"
          "mean_followers_of_followings\n";
    for (const auto& rep : result.replicates)
      for (const auto& o : rep.bots)
        os << rep.seed << ',' << arm_name(o.arm) << ',' << o.bot_id << ','
           << format_double(o.attrs.same_preference_fraction) << ','
           << format_double(o.attrs.mean_followings_of_followings) << ','
           << format_double(o.attrs.mean_followers_of_followings) << "\n";
    write_csv(outdir / "fig5_followings.csv", os.str());
    files.push_back("fig5_followings.csv");
  }
  {
    std::ostringstream os;
    os << "rep_seed,arm,bot_id,node_count,arc_count,mean_directed_clustering,"
          "mean_reciprocal_ratio,global_reciprocity,in_out_corr,in_out_degenerate,"
          "recip_corr_all,recip_corr_positive\n";
    for (const auto& rep : result.replicates)
      for (const auto& o : rep.bots)
        os << rep.seed << ',' << arm_name(o.arm) << ',' << o.bot_id << ',' << o.net.node_count
           << ',' << o.net.arc_count << ',' << format_double(o.net.mean_directed_clustering)
           << ',' << format_double(o.net.mean_reciprocal_ratio) << ','
           << format_double(o.net.global_reciprocity) << ','
           << format_double(o.net.in_out_degree_corr.value) << ','
           << (o.net.in_out_degree_corr.degenerate ? 1 : 0) << ','
           << format_double(o.net.reciprocal_corr_all.value) << ','
           << format_double(o.net.reciprocal_corr_positive.value) << "\n";
    write_csv(outdir / "fig6_structure.csv", os.str());
    files.push_back("fig6_structure.csv");
  }
  {
    std::ostringstream os;
    os << "rep_seed,test,statistic,p_value,method,n_per_group\n";
    for (const auto& rep : result.replicates)
      for (const auto& t : rep.tests) {
        os << rep.seed << ',' << t.test << ',' << format_double(t.statistic) << ','
           << format_double(t.p_value) << ',' << t.method << ',';
        for (std::size_t i = 0; i < t.n_per_group.size(); ++i) {
          if (i) os << ';';
          os << t.n_per_group[i];
        }
        os << "\n";
      }
    write_csv(outdir / "tests.csv", os.str());
    files.push_back("tests.csv");
  }
  {
    std::ostringstream os;
    os << "config_hash " << result.config_hash << "\n";
    os << "replicates " << result.replicates.size() << "\n";
    for (const auto& rep : result.replicates) {
      os << "\nreplicate seed=" << rep.seed << (rep.low_power ? " (low power)" : "") << "\n";
      for (unsigned a = 0; a < config.arms.size(); ++a) {
        double init = 0, fin = 0, clus = 0, rec = 0, same = 0;
        std::size_t n = 0;
        for (const auto& o : rep.bots)
          if (o.arm == a) {
            init += o.initial_pcr;
            fin += o.final_pcr;
            clus += o.net.mean_directed_clustering;
            rec += o.net.global_reciprocity;
            same += o.attrs.same_preference_fraction;
            ++n;
          }
        if (!n) continue;
        const double dn = static_cast<double>(n);
        os << "  " << arm_name(a) << ": n=" << n << " mean_initial_pcr=" << init / dn
           << " mean_final_pcr=" << fin / dn << " mean_clustering=" << clus / dn
           << " mean_reciprocity=" << rec / dn << " same_pref=" << same / dn << "\n";
      }
      for (const auto& t : rep.tests)
        os << "  " << t.test << ": stat=" << t.statistic << " p=" << t.p_value << " ("
           << t.method << ")\n";
    }
    write_csv(outdir / "summary.txt", os.str());
    files.push_back("summary.txt");
  }

  write_manifest(build_manifest(outdir), outdir / "manifest.txt");
  files.push_back("manifest.txt");
  return files;
}

namespace {

// Rebuild the per-bot state and world shell of one replicate from its
// persisted files.
ReplicateResult analyze_replicate(const ExperimentConfig& config, std::uint64_t seed,
                                  const fs::path& repdir) {
  auto require = [](const fs::path& p) {
    if (!fs::exists(p)) throw IoError(p.string(), "missing file");
  };
  require(repdir / "world" / "users.csv");
  require(repdir / "world" / "follows.edges");
  require(repdir / "messages.jsonl");
  require(repdir / "bots" / "followings.csv");

  World world;
  world.config = config.world;
  world.config.rng_seed = seed;
  for (const auto& t : config.world.topics) {
    world.topic_names.push_back(t.name);
    world.vocab.add_topic(t.name, t.zipf.vocab_size);
  }
  {  // users.csv
    std::ifstream in(repdir / "world" / "users.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("user_id", 0) == 0) continue;
      std::istringstream ls(line);
      std::string id_s, topic_s, rate_s, repost_s;
      std::getline(ls, id_s, ',');
      std::getline(ls, topic_s, ',');
      std::getline(ls, rate_s, ',');
      std::getline(ls, repost_s, ',');
      UserProfile u;
      u.id = static_cast<UserId>(std::stoul(id_s));
      u.topic = world.topic_id(topic_s);
      u.posting_rate = std::stod(rate_s);
      u.repost_prob = std::stod(repost_s);
      world.users.push_back(u);
    }
  }
  load_world_graph(world, repdir / "world");

  // message words for the word-frequency recompute
  std::unordered_map<MessageId, MessageId> root_of;
  std::unordered_map<MessageId, std::vector<WordId>> words_of;
  {
    std::ifstream in(repdir / "messages.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      nlohmann::json j = nlohmann::json::parse(line);
      const MessageId id = j.at("id").get<MessageId>();
      root_of[id] = j.at("root").get<MessageId>();
      if (j.contains("words")) words_of[id] = j["words"].get<std::vector<WordId>>();
    }
  }
  const WordsLookup words = [&](MessageId id) -> const std::vector<WordId>& {
    static const std::vector<WordId> empty;
    auto r = root_of.find(id);
    if (r == root_of.end()) return empty;
    auto w = words_of.find(r->second);
    return w == words_of.end() ? empty : w->second;
  };

  const unsigned total_bots = config.bots_per_arm * static_cast<unsigned>(config.arms.size());
  std::vector<BotState> bots(total_bots);
  for (unsigned b = 0; b < total_bots; ++b) {
    bots[b].id = b;
    bots[b].preference = world.topic_id(config.arms[b / config.bots_per_arm].preference);
    bots[b].params = config.bot_params;
    bots[b].phase = BotPhase::finished;
    const fs::path exp = repdir / "bots" / ("exposure_" + std::to_string(b) + ".jsonl");
    require(exp);
    bots[b].exposure_log = read_exposure_log(exp);
  }
  {  // followings.csv
    std::ifstream in(repdir / "bots" / "followings.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.rfind("bot_id", 0) == 0) continue;
      std::istringstream ls(line);
      std::string bot_s, user_s, t_s, trig_s;
      std::getline(ls, bot_s, ',');
      std::getline(ls, user_s, ',');
      std::getline(ls, t_s, ',');
      std::getline(ls, trig_s, ',');
      auto& bot = bots.at(std::stoul(bot_s));
      const UserId u = static_cast<UserId>(std::stoul(user_s));
      bot.followings.push_back(u);
      bot.following_set.insert(u);
      bot.acquired_at.push_back(std::stod(t_s));
      bot.trigger_ids.push_back(trig_s.empty() ? kNoMessage
                                               : static_cast<MessageId>(std::stoul(trig_s)));
    }
  }

  ReplicateResult rep;
  rep.seed = seed;
  for (std::size_t b = 0; b < bots.size(); ++b)
    rep.bots.push_back(outcome_for(config, world, bots[b],
                                   static_cast<unsigned>(b) / config.bots_per_arm, words));
  compute_tests(config, world, bots, rep);
  return rep;
}

}  // namespace

ExperimentResult analyze_run(const fs::path& rundir) {
  const fs::path cfg = rundir / "config.json";
  if (!fs::exists(cfg)) throw IoError(cfg.string(), "missing file");
  ExperimentConfig config =
      ExperimentConfig::from_json_text(read_text_file(cfg), rundir);
  ExperimentResult result;
  result.config = config;
  const std::string echo = config_echo_text(config);
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(echo)));
  result.config_hash = hash;
  for (std::uint64_t seed : config.replicate_seeds)
    result.replicates.push_back(
        analyze_replicate(config, seed, rundir / ("rep_" + std::to_string(seed))));
  return result;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"polarsim: preference-driven social bot simulator"};
  app.require_subcommand(1);
  bool quiet = false;
  std::int64_t seed_override = -1;
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.add_option("--seed", seed_override, "override the replicate seed list with one seed");

  std::string genworld_config, genworld_out;
  auto* genworld = app.add_subcommand("genworld", "generate a world from a config");
  genworld->add_option("config", genworld_config)->required();
  genworld->add_option("-o,--out", genworld_out)->required();

  std::string run_config, run_out;
  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("config", run_config)->required();
  run->add_option("-o,--out", run_out)->required();

  std::string analyze_dir;
  auto* analyze = app.add_subcommand("analyze", "recompute metrics and tests from raw logs");
  analyze->add_option("rundir", analyze_dir)->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "regenerate report tables from raw logs");
  report->add_option("rundir", report_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*genworld) {
      WorldConfig config = WorldConfig::load_file(genworld_config);
      if (seed_override >= 0) config.rng_seed = static_cast<std::uint64_t>(seed_override);
      World world = generate_world(config);
      save_world(world, genworld_out);
      const auto report_v = validate_world(world, config);
      write_text_file(fs::path(genworld_out) / "validation.txt", report_v.to_text());
      if (!quiet) std::cout << report_v.to_text();
    } else if (*run) {
      ExperimentConfig config = ExperimentConfig::load_file(run_config);
      if (seed_override >= 0)
        config.replicate_seeds = {static_cast<std::uint64_t>(seed_override)};
      const auto result = run_experiment(config, run_out);
      emit_report(result, run_out);
      if (!quiet)
        std::cout << "run complete: " << result.replicates.size() << " replicate(s) in "
                  << run_out << "\n";
    } else if (*analyze) {
      const auto result = analyze_run(analyze_dir);
      emit_report(result, fs::path(analyze_dir) / "analysis");
      if (!quiet)
        std::cout << "analysis written to " << (fs::path(analyze_dir) / "analysis").string()
                  << "\n";
    } else if (*report) {
      const auto result = analyze_run(report_dir);
      emit_report(result, report_dir);
      if (!quiet) std::cout << "report tables regenerated in " << report_dir << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace polarsim
