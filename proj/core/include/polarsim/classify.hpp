#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "polarsim/world.hpp"

namespace polarsim {

enum class Verdict { preferred, other };

struct TopicRules {
  std::string topic;
  std::vector<std::string> accept_keywords;
  std::vector<std::string> reject_keywords;
};

// Three-block standard: per-topic accept, common reject, per-topic reject.
// Common reject wins over any accept rule.
struct ClassificationStandard {
  bool reject_advertisement = true;
  std::size_t min_length = 5;  // tokens in synthetic mode
  std::vector<TopicRules> topics;

  static ClassificationStandard load_file(const std::string& path);
  static ClassificationStandard from_json_text(const std::string& text);

  const TopicRules* rules_for(const std::string& topic) const;
};

// Standard with keyword lists resolved to vocabulary word ids.
class CompiledStandard {
 public:
  CompiledStandard() = default;
  CompiledStandard(const ClassificationStandard& std_, const World& world);

  bool common_reject(const World& world, const MessageRecord& m) const;
  // Specific reject for the given preference topic.
  bool specific_reject(const World& world, const MessageRecord& m, TopicId pref) const;

  std::size_t min_length() const { return min_length_; }

 private:
  bool reject_advertisement_ = true;
  std::size_t min_length_ = 5;
  std::vector<std::unordered_set<WordId>> reject_words_;  // per topic id
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Verdict classify(const World& world, const MessageRecord& m,
                           TopicId preference) const = 0;
};

// Ground truth for synthetic runs: preferred iff the message carries the
// preference topic label and survives the reject rules.
class OracleClassifier : public Classifier {
 public:
  explicit OracleClassifier(CompiledStandard std_) : standard_(std::move(std_)) {}
  Verdict classify(const World& world, const MessageRecord& m,
                   TopicId preference) const override;

 private:
  CompiledStandard standard_;
};

}  // namespace polarsim
