#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "polarsim/config.hpp"
#include "polarsim/graph.hpp"
#include "polarsim/rng.hpp"

namespace polarsim {

using UserId = std::uint32_t;
using MessageId = std::uint32_t;
using TopicId = std::uint16_t;
using WordId = std::uint32_t;

inline constexpr MessageId kNoMessage = std::numeric_limits<MessageId>::max();
inline constexpr UserId kNoUser = std::numeric_limits<UserId>::max();

struct UserProfile {
  UserId id = 0;
  TopicId topic = 0;  // topic_preference
  double posting_rate = 0.0;
  double repost_prob = 0.0;
};

// Per-topic word id space; global WordId = offset[topic] + rank (rank 0-based,
// rank 0 is the most probable word of the topic's Zipf law).
class Vocabulary {
 public:
  void add_topic(const std::string& name, std::uint32_t vocab_size) {
    offsets_.push_back(total_);
    sizes_.push_back(vocab_size);
    names_.push_back(name);
    total_ += vocab_size;
  }
  std::uint32_t topic_count() const { return static_cast<std::uint32_t>(sizes_.size()); }
  std::uint32_t size(TopicId t) const { return sizes_[t]; }
  WordId word(TopicId t, std::uint32_t rank) const { return offsets_[t] + rank; }
  std::uint32_t total_words() const { return total_; }
  TopicId topic_of(WordId w) const {
    TopicId t = 0;
    while (t + 1u < offsets_.size() && w >= offsets_[t + 1]) ++t;
    return t;
  }
  std::string word_string(WordId w) const {
    TopicId t = topic_of(w);
    return names_[t] + "_w" + std::to_string(w - offsets_[t] + 1);
  }
  // Inverse of word_string; returns total_words() when not a vocabulary token.
  WordId parse_word(const std::string& s) const;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::string> names_;
  std::uint32_t total_ = 0;
};

struct MessageRecord {
  MessageId id = 0;
  UserId author = 0;
  UserId origin_author = 0;           // root author of the repost chain
  MessageId repost_parent = kNoMessage;
  TopicId topic = 0;
  bool is_advertisement = false;
  double t = 0.0;                     // simulated hours
  MessageId words_ref = 0;            // message holding the word list (chain root)

  bool is_repost() const { return repost_parent != kNoMessage; }
};

// Append-only store with a per-author index in posting order.
class MessageStore {
 public:
  MessageId append(MessageRecord rec, std::vector<WordId> words_if_root) {
    rec.id = static_cast<MessageId>(records_.size());
    if (!rec.is_repost()) {
      rec.words_ref = rec.id;
      words_.push_back(std::move(words_if_root));
    } else {
      words_.emplace_back();  // words live at the chain root
    }
    by_author_[rec.author].push_back(rec.id);
    records_.push_back(rec);
    return rec.id;
  }

  void set_author_count(std::size_t n) { by_author_.resize(n); }

  std::size_t size() const { return records_.size(); }
  const MessageRecord& get(MessageId id) const { return records_[id]; }
  const std::vector<WordId>& words(MessageId id) const {
    return words_[records_[id].words_ref];
  }
  const std::vector<MessageId>& by_author(UserId u) const { return by_author_[u]; }

 private:
  std::vector<MessageRecord> records_;
  std::vector<std::vector<WordId>> words_;
  std::vector<std::vector<MessageId>> by_author_;
};

struct World {
  WorldConfig config;
  std::vector<std::string> topic_names;
  std::vector<UserProfile> users;
  FollowGraph graph;
  Vocabulary vocab;
  MessageStore messages;
  double clock = 0.0;

  TopicId topic_id(const std::string& name) const {
    for (std::size_t i = 0; i < topic_names.size(); ++i)
      if (topic_names[i] == name) return static_cast<TopicId>(i);
    throw ConfigError("topic", "unknown topic name: " + name);
  }
};

}  // namespace polarsim
