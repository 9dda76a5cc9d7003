#include "doctest.h"

#include "oracles.hpp"
#include "polarsim/metrics.hpp"

using namespace polarsim;

namespace {

ExposureRecord record_at(double t, std::initializer_list<std::pair<MessageId, Verdict>> ms) {
  ExposureRecord rec;
  rec.wake_time = t;
  for (const auto& [id, v] : ms) rec.messages.push_back({id, 0, v});
  return rec;
}

}  // namespace

TEST_CASE("pcr series is cumulative with fixed endpoints") {
  std::vector<ExposureRecord> log;
  log.push_back(record_at(0.0, {{0, Verdict::preferred}, {1, Verdict::other}}));
  log.push_back(record_at(5.0, {{2, Verdict::other}, {3, Verdict::other}}));
  log.push_back(record_at(10.0, {{4, Verdict::preferred}}));
  const auto series = pcr_series(log, 0, 3);
  REQUIRE(series.points.size() == 3);
  CHECK(series.points[0].t == 0.0);
  CHECK(series.points[0].pcr == 0.5);        // after first wake
  CHECK(series.points[1].pcr == 0.25);       // 1/4 after second
  CHECK(series.points[2].t == 1.0);
  CHECK(series.points[2].pcr == doctest::Approx(0.4));  // 2/5 overall
  CHECK_THROWS_AS(pcr_series({}, 0, 3), MetricError);
  CHECK_THROWS_AS(pcr_series(log, 0, 1), MetricError);
}

TEST_CASE("word frequencies count a word once per message") {
  std::vector<ExposureRecord> log;
  log.push_back(record_at(0.0, {{0, Verdict::preferred}, {1, Verdict::other}}));
  std::vector<std::vector<WordId>> words = {{7, 7, 8}, {8, 9}};
  const WordsLookup lookup = [&](MessageId id) -> const std::vector<WordId>& {
    return words[id];
  };
  const auto all = word_frequencies_lookup(log, WordScope::all, lookup);
  CHECK(all.total_messages == 2);
  CHECK(all.entries.at(7) == 0.5);   // repeated in-message occurrence deduped
  CHECK(all.entries.at(8) == 1.0);   // present in both messages
  CHECK(all.entries.at(9) == 0.5);
  const auto pref = word_frequencies_lookup(log, WordScope::preferred_only, lookup);
  CHECK(pref.total_messages == 1);
  CHECK(pref.entries.count(9) == 0);
  const auto top = all.top_k(2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == 8);
  CHECK(top[1].first == 7);  // frequency tie broken by word id
}

TEST_CASE("reciprocal metrics match the brute-force oracle on random graphs") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(rng);
    if (g.arc_count() == 0) continue;
    const auto fast = reciprocal_metrics(g);
    const auto slow = oracle::reciprocal_per_node(g);
    CHECK(fast.global_reciprocity == oracle::global_reciprocity(g));
    CHECK(fast.mean_ratio == oracle::mean_reciprocal_ratio(g));
    for (const auto& node : fast.per_node) {
      CHECK(node.n_e == slow[node.node].n_e);
      CHECK(node.n_a == slow[node.node].n_a);
    }
  }
}

TEST_CASE("directed clustering matches the matrix-power oracle") {
  Rng rng(202);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(rng);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      bool fast_def = false, slow_def = false;
      const double fast = directed_clustering_node(g, u, fast_def);
      const double slow = oracle::clustering_node(g, u, slow_def);
      CHECK(fast_def == slow_def);
      if (fast_def) CHECK(fast == slow);
    }
  }
}

TEST_CASE("clustering of known fixtures") {
  DirectedGraph tri(3);  // directed 3-cycle: every node fully clustered
  tri.add_arc(0, 1);
  tri.add_arc(1, 2);
  tri.add_arc(2, 0);
  CHECK(directed_clustering(tri) == doctest::Approx(0.5));

  DirectedGraph star(4);  // pure out-star: no triangles
  star.add_arc(1, 0);
  star.add_arc(2, 0);
  star.add_arc(3, 0);
  CHECK(directed_clustering(star) == 0.0);
}

TEST_CASE("degree tails match the oracle") {
  Rng rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng);
    const auto stats = degree_stats(g);
    std::vector<std::uint32_t> ind;
    for (NodeId u = 0; u < g.node_count(); ++u)
      ind.push_back(static_cast<std::uint32_t>(g.in_degree(u)));
    const auto slow = oracle::degree_tail(ind);
    REQUIRE(stats.in_tail.size() == slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i) {
      CHECK(stats.in_tail[i].k == slow[i].first);
      CHECK(stats.in_tail[i].p_ge == slow[i].second);
    }
  }
}

TEST_CASE("personal network excludes the bot and spans followings plus sources") {
  World w;
  w.topic_names = {"t"};
  w.vocab.add_topic("t", 10);
  w.users.resize(6);
  for (UserId u = 0; u < 6; ++u) w.users[u] = {u, 0, 0.0, 0.0};
  w.graph.resize(6);
  w.graph.add_arc(0, 1);
  w.graph.add_arc(1, 2);
  w.graph.add_arc(2, 1);
  w.graph.add_arc(3, 4);  // outside
  w.graph.add_arc(4, 0);  // gives following 0 a follower outside the network

  BotState bot;
  bot.preference = 0;
  bot.followings = {0, 1};
  const auto pn = extract_personal_network(w, bot);
  // nodes: followings {0,1} plus their out-neighbors {1,2}
  CHECK(pn.node_users == std::vector<UserId>{0, 1, 2});
  CHECK(pn.graph.arc_count() == 3);
  const auto only = extract_personal_network(w, bot, true);
  CHECK(only.node_users == std::vector<UserId>{0, 1});
  CHECK(only.graph.arc_count() == 1);

  const auto attrs = followings_attributes(w, bot);
  CHECK(attrs.same_preference_fraction == 1.0);
  CHECK(attrs.mean_followings_of_followings == 1.0);
  CHECK(attrs.mean_followers_of_followings == 1.5);  // in-degrees 1 and 2
}

TEST_CASE("degenerate graphs raise metric errors") {
  DirectedGraph empty_arcs(4);
  CHECK_THROWS_AS(reciprocal_metrics(empty_arcs), MetricError);
  DirectedGraph two(2);
  two.add_arc(0, 1);
  CHECK_THROWS_AS(directed_clustering(two), MetricError);
  CHECK_THROWS_AS(reciprocal_degree_correlation(two, ReciprocalCorrVariant::all_nodes),
                  MetricError);
  // network_report degrades gracefully instead of throwing
  const auto report = network_report(empty_arcs);
  CHECK(report.node_count == 4);
  CHECK(report.arc_count == 0);
  CHECK(report.global_reciprocity == 0.0);
  CHECK(report.in_out_degree_corr.degenerate);
}
