#include "doctest.h"

#include "polarsim/engine.hpp"
#include "polarsim/worldgen.hpp"

using namespace polarsim;

namespace {

// Hand-built two-user world for timeline assertions.
World tiny_world() {
  World w;
  w.config = WorldConfig::from_json_text(R"({
    "user_count": 3, "rng_seed": 1,
    "cross_topic_arcs_per_user": 0,
    "topics": {"t": {"fraction": 1.0, "vocab_size": 50}}
  })");
  w.topic_names = {"t"};
  w.vocab.add_topic("t", 50);
  w.users = {{0, 0, 0.0, 0.0}, {1, 0, 0.0, 0.0}, {2, 0, 0.0, 0.0}};
  w.graph.resize(3);
  w.messages.set_author_count(3);
  return w;
}

MessageId post(World& w, UserId author, double t) {
  MessageRecord m;
  m.author = author;
  m.origin_author = author;
  m.t = t;
  return w.messages.append(m, {1, 2, 3, 4, 5});
}

MessageId repost(World& w, UserId author, MessageId parent, double t) {
  const auto& p = w.messages.get(parent);
  MessageRecord m;
  m.author = author;
  m.origin_author = p.origin_author;
  m.repost_parent = parent;
  m.topic = p.topic;
  m.t = t;
  m.words_ref = p.words_ref;
  return w.messages.append(m, {});
}

}  // namespace

TEST_CASE("timeline is newest first with id tiebreak and respects now") {
  World w = tiny_world();
  const auto a = post(w, 0, 1.0);
  const auto b = post(w, 1, 2.0);
  const auto c = post(w, 0, 2.0);  // same t as b, higher id
  const auto d = post(w, 1, 5.0);
  const auto tl = compose_timeline(w, {0, 1}, 3.0);
  CHECK(tl == std::vector<MessageId>{c, b, a});  // d excluded (t > now)
  CHECK(compose_timeline(w, {0, 1}, 10.0).front() == d);
  CHECK(compose_timeline(w, {2}, 10.0).empty());
}

TEST_CASE("timeline truncates at the cap") {
  World w = tiny_world();
  for (int i = 0; i < 80; ++i) post(w, 0, static_cast<double>(i));
  const auto tl = compose_timeline(w, {0}, 1000.0);
  CHECK(tl.size() == kTimelineCap);
  // newest kept
  CHECK(w.messages.get(tl.front()).t == 79.0);
  CHECK(w.messages.get(tl.back()).t == 30.0);
}

TEST_CASE("direct source is the immediate upstream author") {
  World w = tiny_world();
  const auto root = post(w, 0, 1.0);
  const auto mid = repost(w, 1, root, 2.0);
  const auto leaf = repost(w, 2, mid, 3.0);
  CHECK(direct_source(w, mid) == 0);
  CHECK(direct_source(w, leaf) == 1);
  CHECK(w.messages.get(leaf).origin_author == 0);
  CHECK(w.messages.words(leaf) == w.messages.words(root));
  CHECK_THROWS_AS(direct_source(w, root), std::invalid_argument);
}

TEST_CASE("engine replays deterministically and keeps time order") {
  auto config = WorldConfig::from_json_text(R"({
    "user_count": 120, "rng_seed": 5, "posting_rate": 0.2,
    "repost_prob": 0.4, "cross_topic_arcs_per_user": 1,
    "topics": {
      "a": {"fraction": 0.5, "regime": "mutual", "arcs_per_node": 3},
      "b": {"fraction": 0.5, "regime": "mutual", "arcs_per_node": 3}
    }
  })");
  World w1 = generate_world(config), w2 = generate_world(config);
  Engine e1(w1), e2(w2);
  const auto log1 = e1.step_until(200.0);
  const auto log2 = e2.step_until(200.0);
  REQUIRE(!log1.empty());
  REQUIRE(log1.size() == log2.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < log1.size(); ++i) {
    CHECK(log1[i].t == log2[i].t);
    CHECK(log1[i].actor == log2[i].actor);
    CHECK(log1[i].message_id == log2[i].message_id);
    CHECK(log1[i].t >= prev);
    prev = log1[i].t;
    if (log1[i].kind == EventKind::repost) {
      const auto& m = w1.messages.get(log1[i].message_id);
      CHECK(m.is_repost());
      // reposts inherit topic and words from the chain root
      CHECK(m.topic == w1.messages.get(m.repost_parent).topic);
      CHECK(m.words_ref == w1.messages.get(m.repost_parent).words_ref);
    }
  }
  CHECK(w1.clock == 200.0);
  CHECK_THROWS_AS(e1.step_until(100.0), std::invalid_argument);
  // stepping further continues the same stream
  const auto more = e1.step_until(250.0);
  for (const auto& ev : more) CHECK(ev.t >= 200.0);
}

TEST_CASE("step_until with no eligible posters is a no-op") {
  World w = tiny_world();  // all rates zero
  Engine e(w);
  CHECK(e.step_until(50.0).empty());
  CHECK(w.clock == 50.0);
}
