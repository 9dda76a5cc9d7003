#include "doctest.h"

#include "polarsim/metrics.hpp"
#include "polarsim/worldgen.hpp"

using namespace polarsim;

namespace {

WorldConfig two_topic_config() {
  return WorldConfig::from_json_text(R"({
    "user_count": 600,
    "rng_seed": 11,
    "cross_topic_arcs_per_user": 1,
    "topics": {
      "star": {"fraction": 0.5, "regime": "broadcast", "hub_exponent": 2.2,
               "target_reciprocity": 0.0, "arcs_per_node": 1},
      "ring": {"fraction": 0.5, "regime": "mutual", "target_reciprocity": 0.6,
               "rewiring_prob": 0.1, "arcs_per_node": 5}
    }
  })");
}

}  // namespace

TEST_CASE("zipf sampler matches its law roughly and deterministically") {
  ZipfSampler s(100, 1.0);
  Rng a(5), b(5);
  std::vector<std::size_t> counts(100, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto r = s.draw(a);
    CHECK(r == s.draw(b));
    CHECK(r < 100);
    ++counts[r];
  }
  CHECK(counts[0] > counts[9]);
  CHECK(counts[0] > 3000);  // rank 1 carries ~1/H_100 ~ 19%
}

TEST_CASE("generate_world honors fractions and is deterministic") {
  const auto config = two_topic_config();
  const World w1 = generate_world(config);
  const World w2 = generate_world(config);
  REQUIRE(w1.users.size() == 600);
  std::size_t star = 0;
  for (const auto& u : w1.users)
    if (u.topic == 0) ++star;
  CHECK(star == 300);
  CHECK(w1.graph.arc_count() == w2.graph.arc_count());
  for (UserId u = 0; u < 600; ++u) CHECK(w1.graph.out(u) == w2.graph.out(u));
  CHECK(w1.vocab.topic_count() == 2);
  CHECK(w1.vocab.total_words() == w1.vocab.size(0) + w1.vocab.size(1));
}

TEST_CASE("mutual regime reciprocity lands near its target") {
  const auto config = two_topic_config();
  const World w = generate_world(config);
  // induced ring-community subgraph
  DirectedGraph sub(300);
  for (UserId u = 300; u < 600; ++u)
    for (UserId v : w.graph.out(u))
      if (v >= 300) sub.add_arc(u - 300, v - 300);
  const double rec = reciprocal_metrics(sub).global_reciprocity;
  CHECK(rec == doctest::Approx(0.6).epsilon(0.15));
}

TEST_CASE("broadcast regime with reciprocity zero has no reciprocal in-community arcs") {
  const auto config = two_topic_config();
  const World w = generate_world(config);
  for (UserId u = 0; u < 300; ++u)
    for (UserId v : w.graph.out(u))
      if (v < 300) CHECK(!w.graph.has_arc(v, u));
}

TEST_CASE("hub boost raises posting rates above the percentile only") {
  auto config = two_topic_config();
  config.hub_boost = 4.0;
  config.hub_percentile = 0.95;
  const World w = generate_world(config);
  std::size_t boosted = 0;
  for (const auto& u : w.users) {
    if (u.posting_rate > config.posting_rate * 1.5) ++boosted;
  }
  CHECK(boosted > 0);
  CHECK(boosted < w.users.size() / 10);
}

TEST_CASE("validate_world reports per-community checks") {
  const auto config = two_topic_config();
  const World w = generate_world(config);
  const auto report = validate_world(w, config);
  REQUIRE(report.communities.size() == 2);
  CHECK(report.communities[0].topic == "star");
  CHECK(report.communities[1].reciprocity_ok);
  CHECK(report.to_text().find("reciprocity=") != std::string::npos);
}
