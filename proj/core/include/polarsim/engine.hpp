#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarsim/world.hpp"
#include "polarsim/worldgen.hpp"

namespace polarsim {

enum class EventKind { post, repost };

struct EventRecord {
  double t = 0.0;
  EventKind kind = EventKind::post;
  UserId actor = 0;
  MessageId message_id = 0;
  MessageId parent_id = kNoMessage;
};

inline constexpr std::size_t kTimelineCap = 50;

// Chronological timeline: messages authored (posts and reposts) by the given
// followings, timestamp <= now, newest first, ties by message_id descending,
// truncated to kTimelineCap. No ranking of any other kind.
std::vector<MessageId> compose_timeline(const World& world,
                                        const std::vector<UserId>& followings,
                                        double now);

ArcInsert add_follow(World& world, UserId src, UserId dst);

// Author of the repost parent: the immediate upstream user, not the origin.
UserId direct_source(const World& world, MessageId id);

// Discrete-event engine over one World. Single writer; processes user
// post/repost events in (time, sequence) order.
class Engine {
 public:
  explicit Engine(World& world, std::uint64_t seed_salt = 0);

  // Advance to t_end, returning the events processed by this call.
  std::vector<EventRecord> step_until(double t_end);

  const std::vector<EventRecord>& event_log() const { return log_; }
  World& world() { return world_; }
  const World& world() const { return world_; }

 private:
  struct Pending {
    double t;
    std::uint64_t seq;
    UserId user;
    bool operator>(const Pending& o) const {
      if (t != o.t) return t > o.t;
      return seq > o.seq;
    }
  };

  void schedule(UserId u, double from);
  void emit(UserId u, double t, std::vector<EventRecord>& out);

  World& world_;
  Rng rng_;
  std::uint64_t seq_ = 0;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::vector<EventRecord> log_;
  std::vector<ZipfSampler> samplers_;  // one per topic
};

}  // namespace polarsim
