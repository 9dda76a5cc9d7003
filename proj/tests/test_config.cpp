#include "doctest.h"

#include "polarsim/config.hpp"

using namespace polarsim;

namespace {

const char* kMinimal = R"({
  "user_count": 100,
  "rng_seed": 9,
  "topics": {
    "a": {"fraction": 0.6, "regime": "broadcast", "hub_exponent": 2.2},
    "b": {"fraction": 0.4, "regime": "mutual", "target_reciprocity": 0.5}
  }
})";

}  // namespace

TEST_CASE("world config parses with defaults") {
  const auto c = WorldConfig::from_json_text(kMinimal);
  CHECK(c.user_count == 100);
  CHECK(c.rng_seed == 9);
  CHECK(c.topics.size() == 2);
  CHECK(c.topics[0].name == "a");  // file order preserved
  CHECK(c.topics[0].regime.kind == RegimeKind::broadcast);
  CHECK(c.topics[1].regime.target_reciprocity == 0.5);
  CHECK(c.topics[0].cross_topic_arcs == -1);
  CHECK(c.topics[0].repost_prob == -1.0);
  CHECK(c.topic_index("b") == 1);
  CHECK(c.topic_index("zzz") == -1);
}

TEST_CASE("world config round-trips through json") {
  const auto c = WorldConfig::from_json_text(kMinimal);
  const auto c2 = WorldConfig::from_json_text(c.to_json_text());
  CHECK(c2.to_json_text() == c.to_json_text());
}

TEST_CASE("validation names the offending field") {
  auto bad = [](const std::string& text, const std::string& needle) {
    try {
      WorldConfig::from_json_text(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  bad(R"({"user_count": 0, "topics": {"a": {"fraction": 1.0}}})", "user_count");
  bad(R"({"user_count": 10, "topics": {"a": {"fraction": 0.5}}})", "topics");
  bad(R"({"user_count": 10, "repost_prob": 1.5,
          "topics": {"a": {"fraction": 1.0}}})",
      "repost_prob");
  bad(R"({"user_count": 10,
          "topics": {"a": {"fraction": 1.0, "hub_exponent": 0.9}}})",
      "hub_exponent");
  bad("not json at all", "JSON");
}
