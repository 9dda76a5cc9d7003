#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarsim {

// Raised for any malformed configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class RegimeKind { broadcast, mutual };

struct TopologyRegime {
  RegimeKind kind = RegimeKind::mutual;
  double hub_exponent = 2.5;        // target in-degree tail exponent (broadcast)
  double target_reciprocity = 0.5;  // fraction of arcs with a reverse arc
  double rewiring_prob = 0.1;       // mutual regime: Watts-Strogatz style rewiring
  unsigned arcs_per_node = 5;       // base out-degree budget of the construction
};

struct ZipfParams {
  std::uint32_t vocab_size = 2000;
  double zipf_exponent = 1.0;
};

struct TopicConfig {
  std::string name;
  double fraction = 0.0;
  TopologyRegime regime;
  ZipfParams zipf;
  // Per-topic override of cross_topic_arcs_per_user; negative means "use the
  // world-level default".
  int cross_topic_arcs = -1;
  // Behavioral overrides; negative means "use the world-level default".
  double repost_prob = -1.0;
  double cross_topic_repost_prob = -1.0;
  // Probability that an original post is written on a different, uniformly
  // chosen topic (minority-interest accounts mostly post general content).
  double off_topic_post_prob = 0.0;
  // Optional validate_world targets; negative means "not checked".
  double target_clustering = -1.0;
  double target_tail_exponent = -1.0;  // defaults to regime.hub_exponent for broadcast
};

struct WorldConfig {
  std::uint32_t user_count = 0;
  std::vector<TopicConfig> topics;  // file order preserved
  double posting_rate = 0.05;       // mean posts per simulated hour per user
  double repost_prob = 0.4;
  double cross_topic_repost_prob = 0.3;
  unsigned cross_topic_arcs_per_user = 2;
  double hub_boost = 3.0;           // posting_rate multiplier above hub_percentile
  double hub_percentile = 0.95;
  double ad_prob = 0.03;            // fraction of original posts flagged advertisement
  unsigned min_message_length = 8;
  unsigned max_message_length = 40;
  std::uint64_t rng_seed = 1;

  void validate() const;  // throws ConfigError naming the offending field

  static WorldConfig load_file(const std::string& path);
  static WorldConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  int topic_index(const std::string& name) const;  // -1 when absent
};

}  // namespace polarsim
