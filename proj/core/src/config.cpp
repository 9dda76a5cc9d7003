#include "polarsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polarsim {

using ordered_json = nlohmann::ordered_json;

namespace {

void require_fraction(double v, const std::string& field) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "must be in [0,1]");
}

RegimeKind parse_regime(const std::string& s, const std::string& field) {
  if (s == "broadcast") return RegimeKind::broadcast;
  if (s == "mutual") return RegimeKind::mutual;
  throw ConfigError(field, "unknown regime kind: " + s);
}

}  // namespace

void WorldConfig::validate() const {
  if (user_count == 0) throw ConfigError("user_count", "must be positive");
  if (topics.empty()) throw ConfigError("topics", "at least one topic required");
  double mix = 0.0;
  for (const auto& t : topics) {
    const std::string p = "topics." + t.name;
    if (t.fraction < 0.0) throw ConfigError(p + ".fraction", "must be >= 0");
    mix += t.fraction;
    if (t.regime.hub_exponent <= 1.0)
      throw ConfigError(p + ".hub_exponent", "must be > 1");
    require_fraction(t.regime.target_reciprocity, p + ".target_reciprocity");
    require_fraction(t.regime.rewiring_prob, p + ".rewiring_prob");
    if (t.regime.arcs_per_node == 0)
      throw ConfigError(p + ".arcs_per_node", "must be positive");
    if (t.repost_prob > 1.0) throw ConfigError(p + ".repost_prob", "must be <= 1");
    if (t.cross_topic_repost_prob > 1.0)
      throw ConfigError(p + ".cross_topic_repost_prob", "must be <= 1");
    require_fraction(t.off_topic_post_prob, p + ".off_topic_post_prob");
    if (t.zipf.vocab_size == 0) throw ConfigError(p + ".vocab_size", "must be positive");
    if (t.zipf.zipf_exponent <= 0.0)
      throw ConfigError(p + ".zipf_exponent", "must be > 0");
  }
  if (std::abs(mix - 1.0) > 1e-9)
    throw ConfigError("topics", "fractions must sum to 1 within 1e-9");
  if (posting_rate < 0.0) throw ConfigError("posting_rate", "must be >= 0");
  require_fraction(repost_prob, "repost_prob");
  require_fraction(cross_topic_repost_prob, "cross_topic_repost_prob");
  require_fraction(ad_prob, "ad_prob");
  require_fraction(hub_percentile, "hub_percentile");
  if (hub_boost <= 0.0) throw ConfigError("hub_boost", "must be > 0");
  if (min_message_length == 0 || max_message_length < min_message_length)
    throw ConfigError("message_length", "need 0 < min <= max");
}

int WorldConfig::topic_index(const std::string& name) const {
  for (std::size_t i = 0; i < topics.size(); ++i)
    if (topics[i].name == name) return static_cast<int>(i);
  return -1;
}

WorldConfig WorldConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
  WorldConfig c;
  try {
    c.user_count = j.at("user_count").get<std::uint32_t>();
    c.rng_seed = j.value("rng_seed", std::uint64_t{1});
    c.posting_rate = j.value("posting_rate", c.posting_rate);
    c.repost_prob = j.value("repost_prob", c.repost_prob);
    c.cross_topic_repost_prob = j.value("cross_topic_repost_prob", c.cross_topic_repost_prob);
    c.cross_topic_arcs_per_user = j.value("cross_topic_arcs_per_user", c.cross_topic_arcs_per_user);
    c.hub_boost = j.value("hub_boost", c.hub_boost);
    c.hub_percentile = j.value("hub_percentile", c.hub_percentile);
    c.ad_prob = j.value("ad_prob", c.ad_prob);
    if (j.contains("message_length")) {
      c.min_message_length = j["message_length"].at(0).get<unsigned>();
      c.max_message_length = j["message_length"].at(1).get<unsigned>();
    }
    for (auto& [name, tj] : j.at("topics").items()) {
      TopicConfig t;
      t.name = name;
      t.fraction = tj.at("fraction").get<double>();
      t.regime.kind = parse_regime(tj.value("regime", "mutual"), "topics." + name + ".regime");
      t.regime.hub_exponent = tj.value("hub_exponent", t.regime.hub_exponent);
      t.regime.target_reciprocity = tj.value("target_reciprocity", t.regime.target_reciprocity);
      t.regime.rewiring_prob = tj.value("rewiring_prob", t.regime.rewiring_prob);
      t.regime.arcs_per_node = tj.value("arcs_per_node", t.regime.arcs_per_node);
      t.cross_topic_arcs = tj.value("cross_topic_arcs", -1);
      t.repost_prob = tj.value("repost_prob", -1.0);
      t.cross_topic_repost_prob = tj.value("cross_topic_repost_prob", -1.0);
      t.off_topic_post_prob = tj.value("off_topic_post_prob", 0.0);
      t.zipf.vocab_size = tj.value("vocab_size", t.zipf.vocab_size);
      t.zipf.zipf_exponent = tj.value("zipf_exponent", t.zipf.zipf_exponent);
      t.target_clustering = tj.value("target_clustering", -1.0);
      t.target_tail_exponent = tj.value("target_tail_exponent", -1.0);
      c.topics.push_back(std::move(t));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("<file>", std::string("bad or missing key: ") + e.what());
  }
  c.validate();
  return c;
}

WorldConfig WorldConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string WorldConfig::to_json_text() const {
  ordered_json j;
  j["user_count"] = user_count;
  j["rng_seed"] = rng_seed;
  j["posting_rate"] = posting_rate;
  j["repost_prob"] = repost_prob;
  j["cross_topic_repost_prob"] = cross_topic_repost_prob;
  j["cross_topic_arcs_per_user"] = cross_topic_arcs_per_user;
  j["hub_boost"] = hub_boost;
  j["hub_percentile"] = hub_percentile;
  j["ad_prob"] = ad_prob;
  j["message_length"] = {min_message_length, max_message_length};
  ordered_json topics_j;
  for (const auto& t : topics) {
    ordered_json tj;
    tj["fraction"] = t.fraction;
    tj["regime"] = t.regime.kind == RegimeKind::broadcast ? "broadcast" : "mutual";
    tj["hub_exponent"] = t.regime.hub_exponent;
    tj["target_reciprocity"] = t.regime.target_reciprocity;
    tj["rewiring_prob"] = t.regime.rewiring_prob;
    tj["arcs_per_node"] = t.regime.arcs_per_node;
    if (t.cross_topic_arcs >= 0) tj["cross_topic_arcs"] = t.cross_topic_arcs;
    if (t.repost_prob >= 0.0) tj["repost_prob"] = t.repost_prob;
    if (t.cross_topic_repost_prob >= 0.0)
      tj["cross_topic_repost_prob"] = t.cross_topic_repost_prob;
    if (t.off_topic_post_prob > 0.0) tj["off_topic_post_prob"] = t.off_topic_post_prob;
    tj["vocab_size"] = t.zipf.vocab_size;
    tj["zipf_exponent"] = t.zipf.zipf_exponent;
    if (t.target_clustering >= 0.0) tj["target_clustering"] = t.target_clustering;
    if (t.target_tail_exponent >= 0.0) tj["target_tail_exponent"] = t.target_tail_exponent;
    topics_j[t.name] = std::move(tj);
  }
  j["topics"] = std::move(topics_j);
  return j.dump(2) + "\n";
}

}  // namespace polarsim
