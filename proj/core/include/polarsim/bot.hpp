#pragma once

#include <optional>
#include <unordered_set>
#include <vector>

#include "polarsim/classify.hpp"
#include "polarsim/engine.hpp"

namespace polarsim {

using BotId = std::uint32_t;

struct ExposedMessage {
  MessageId id = 0;
  TopicId topic = 0;
  Verdict verdict = Verdict::other;
};

struct ExposureRecord {
  double wake_time = 0.0;
  std::vector<ExposedMessage> messages;  // length <= kTimelineCap
  std::optional<UserId> new_following;
  std::optional<MessageId> trigger_message;
};

enum class BotPhase { initializing, running, finished };

struct BotParams {
  unsigned follow_cap = 120;
  double idle_min = 2.0;
  double idle_max = 4.0;
  unsigned seed_pool_min = 100;
};

struct BotState {
  BotId id = 0;
  TopicId preference = 0;
  BotParams params;
  std::vector<UserId> followings;      // insertion order
  std::vector<double> acquired_at;     // parallel to followings; seeds at init time
  std::vector<MessageId> trigger_ids;  // kNoMessage for seeds
  std::unordered_set<UserId> following_set;
  unsigned seed_count = 0;
  double next_wake = 0.0;
  BotPhase phase = BotPhase::initializing;
  bool timed_out = false;  // hit t_max before the cap; still a valid finish
  std::vector<ExposureRecord> exposure_log;
};

class LifecycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step 1: 2 or 3 distinct seed followings drawn uniformly from a pool of at
// least `seed_pool_min` preference-matched candidates; first wake scheduled
// uniformly in the idle range from `now`.
BotState init_bot(BotId id, TopicId preference, const std::vector<UserId>& seed_pool,
                  Rng& rng, const BotParams& params = {}, double now = 0.0);

// Steps 2-5 of the workflow for one wake. At most one new following.
ExposureRecord wake(BotState& bot, const World& world, const Classifier& classifier,
                    Rng& rng);

// Interleaves platform stepping and wakes until the cap or t_max.
BotState& run_bot_to_completion(BotState& bot, Engine& engine,
                                const Classifier& classifier, Rng& rng,
                                double t_max = 1440.0);

}  // namespace polarsim
