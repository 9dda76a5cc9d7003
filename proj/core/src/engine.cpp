#include "polarsim/engine.hpp"

#include <algorithm>

namespace polarsim {

std::vector<MessageId> compose_timeline(const World& world,
                                        const std::vector<UserId>& followings,
                                        double now) {
  // Merge per-author message lists (time ascending) from the back; newest
  // first, ties by message_id descending.
  struct Cursor {
    double t;
    MessageId id;
    std::size_t author_idx;
    std::size_t pos;  // index into the author's list, next to consume
    bool operator<(const Cursor& o) const {
      if (t != o.t) return t < o.t;
      return id < o.id;
    }
  };
  std::vector<Cursor> heap;
  heap.reserve(followings.size());
  const auto& store = world.messages;
  for (std::size_t fi = 0; fi < followings.size(); ++fi) {
    const auto& list = store.by_author(followings[fi]);
    // last message with t <= now
    auto it = std::upper_bound(list.begin(), list.end(), now,
                               [&](double v, MessageId id) { return v < store.get(id).t; });
    if (it == list.begin()) continue;
    const std::size_t pos = static_cast<std::size_t>(it - list.begin()) - 1;
    heap.push_back({store.get(list[pos]).t, list[pos], fi, pos});
  }
  std::make_heap(heap.begin(), heap.end());
  std::vector<MessageId> out;
  while (!heap.empty() && out.size() < kTimelineCap) {
    std::pop_heap(heap.begin(), heap.end());
    Cursor c = heap.back();
    heap.pop_back();
    out.push_back(c.id);
    if (c.pos > 0) {
      const auto& list = store.by_author(followings[c.author_idx]);
      const std::size_t pos = c.pos - 1;
      heap.push_back({store.get(list[pos]).t, list[pos], c.author_idx, pos});
      std::push_heap(heap.begin(), heap.end());
    }
  }
  return out;
}

ArcInsert add_follow(World& world, UserId src, UserId dst) {
  return world.graph.add_arc(src, dst);  // throws on src == dst
}

UserId direct_source(const World& world, MessageId id) {
  const auto& m = world.messages.get(id);
  if (!m.is_repost())
    throw std::invalid_argument("direct_source: message is not a repost");
  return world.messages.get(m.repost_parent).author;
}

Engine::Engine(World& world, std::uint64_t seed_salt)
    : world_(world), rng_(derive_seed(world.config.rng_seed, 1 + seed_salt)) {
  for (const auto& t : world.config.topics)
    samplers_.emplace_back(t.zipf.vocab_size, t.zipf.zipf_exponent);
  for (const auto& u : world_.users)
    if (u.posting_rate > 0.0) schedule(u.id, world_.clock);
}

void Engine::schedule(UserId u, double from) {
  const double rate = world_.users[u].posting_rate;
  if (rate <= 0.0) return;
  queue_.push({from + exponential(rng_, rate), seq_++, u});
}

void Engine::emit(UserId u, double t, std::vector<EventRecord>& out) {
  const auto& profile = world_.users[u];
  MessageId picked = kNoMessage;
  if (bernoulli(rng_, profile.repost_prob)) {
    // Repost from the user's own latest-50 timeline; same exposure rule as
    // every other viewer. Prefer same-topic candidates, cross-topic with
    // probability cross_topic_repost_prob.
    const auto timeline = compose_timeline(world_, world_.graph.out(u), t);
    if (!timeline.empty()) {
      std::vector<MessageId> same, cross;
      for (MessageId id : timeline)
        (world_.messages.get(id).topic == profile.topic ? same : cross).push_back(id);
      const auto& tc = world_.config.topics[profile.topic];
      const double cross_p = tc.cross_topic_repost_prob >= 0.0
                                 ? tc.cross_topic_repost_prob
                                 : world_.config.cross_topic_repost_prob;
      const bool want_cross = bernoulli(rng_, cross_p);
      const auto& pool = want_cross ? (cross.empty() ? same : cross)
                                    : (same.empty() ? cross : same);
      picked = pool[uniform_index(rng_, pool.size())];
    }
  }

  MessageRecord rec;
  rec.author = u;
  rec.t = t;
  std::vector<WordId> words;
  if (picked != kNoMessage) {
    const auto& parent = world_.messages.get(picked);
    rec.repost_parent = picked;
    rec.origin_author = parent.origin_author;
    rec.topic = parent.topic;
    rec.is_advertisement = parent.is_advertisement;
    rec.words_ref = parent.words_ref;
  } else {
    rec.origin_author = u;
    TopicId topic = profile.topic;
    const auto& tc = world_.config.topics[profile.topic];
    const std::size_t topic_count = world_.config.topics.size();
    if (topic_count > 1 && bernoulli(rng_, tc.off_topic_post_prob)) {
      const auto pick = uniform_index(rng_, topic_count - 1);
      topic = static_cast<TopicId>(pick < profile.topic ? pick : pick + 1);
    }
    rec.topic = topic;
    rec.is_advertisement = bernoulli(rng_, world_.config.ad_prob);
    const auto len = static_cast<std::size_t>(uniform_int(
        rng_, world_.config.min_message_length, world_.config.max_message_length));
    words.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
      words.push_back(world_.vocab.word(topic, samplers_[topic].draw(rng_)));
  }
  const MessageId id = world_.messages.append(rec, std::move(words));
  EventRecord ev{t, picked == kNoMessage ? EventKind::post : EventKind::repost, u, id,
                 picked};
  log_.push_back(ev);
  out.push_back(ev);
}

std::vector<EventRecord> Engine::step_until(double t_end) {
  if (t_end < world_.clock)
    throw std::invalid_argument("step_until: t_end precedes the world clock");
  std::vector<EventRecord> out;
  while (!queue_.empty() && queue_.top().t <= t_end) {
    const Pending p = queue_.top();
    queue_.pop();
    world_.clock = p.t;
    emit(p.user, p.t, out);
    schedule(p.user, p.t);
  }
  world_.clock = t_end;
  return out;
}

}  // namespace polarsim
