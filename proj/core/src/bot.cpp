#include "polarsim/bot.hpp"

#include <algorithm>

namespace polarsim {

BotState init_bot(BotId id, TopicId preference, const std::vector<UserId>& seed_pool,
                  Rng& rng, const BotParams& params, double now) {
  if (seed_pool.size() < params.seed_pool_min)
    throw ConfigError("seed_pool", "needs at least " + std::to_string(params.seed_pool_min) +
                                       " candidates");
  BotState bot;
  bot.id = id;
  bot.preference = preference;
  bot.params = params;
  bot.seed_count = bernoulli(rng, 0.5) ? 2u : 3u;
  while (bot.followings.size() < bot.seed_count) {
    const UserId u = seed_pool[uniform_index(rng, seed_pool.size())];
    if (bot.following_set.insert(u).second) {
      bot.followings.push_back(u);
      bot.acquired_at.push_back(now);
      bot.trigger_ids.push_back(kNoMessage);
    }
  }
  bot.next_wake = now + uniform_real(rng, params.idle_min, params.idle_max);
  bot.phase = BotPhase::running;
  if (bot.followings.size() >= params.follow_cap) bot.phase = BotPhase::finished;
  return bot;
}

ExposureRecord wake(BotState& bot, const World& world, const Classifier& classifier,
                    Rng& rng) {
  if (bot.phase != BotPhase::running)
    throw LifecycleError("wake called on a bot that is not running");

  ExposureRecord rec;
  rec.wake_time = world.clock;
  const auto timeline = compose_timeline(world, bot.followings, world.clock);

  // preferred reposts whose direct source is new; selection is uniform over
  // messages, so frequently reposted sources are more likely to be followed
  std::vector<MessageId> candidates;
  rec.messages.reserve(timeline.size());
  for (MessageId id : timeline) {
    const auto& m = world.messages.get(id);
    const Verdict v = classifier.classify(world, m, bot.preference);
    rec.messages.push_back({id, m.topic, v});
    if (v == Verdict::preferred && m.is_repost()) {
      const UserId src = direct_source(world, id);
      if (!bot.following_set.count(src)) candidates.push_back(id);
    }
  }

  if (!candidates.empty() && bot.followings.size() < bot.params.follow_cap) {
    const MessageId trigger = candidates[uniform_index(rng, candidates.size())];
    const UserId src = direct_source(world, trigger);
    bot.followings.push_back(src);
    bot.acquired_at.push_back(world.clock);
    bot.trigger_ids.push_back(trigger);
    bot.following_set.insert(src);
    rec.new_following = src;
    rec.trigger_message = trigger;
  }

  if (bot.followings.size() >= bot.params.follow_cap) {
    bot.phase = BotPhase::finished;
  } else {
    bot.next_wake =
        world.clock + uniform_real(rng, bot.params.idle_min, bot.params.idle_max);
  }
  bot.exposure_log.push_back(rec);
  return rec;
}

BotState& run_bot_to_completion(BotState& bot, Engine& engine,
                                const Classifier& classifier, Rng& rng, double t_max) {
  while (bot.phase == BotPhase::running) {
    if (bot.next_wake > t_max) {
      bot.phase = BotPhase::finished;
      bot.timed_out = true;
      break;
    }
    engine.step_until(bot.next_wake);
    wake(bot, engine.world(), classifier, rng);
  }
  return bot;
}

}  // namespace polarsim
