#include "polarsim/classify.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polarsim {

const TopicRules* ClassificationStandard::rules_for(const std::string& topic) const {
  for (const auto& t : topics)
    if (t.topic == topic) return &t;
  return nullptr;
}

ClassificationStandard ClassificationStandard::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("<standard>", std::string("not valid JSON: ") + e.what());
  }
  ClassificationStandard s;
  const auto common = j.value("common_reject", nlohmann::json::object());
  s.reject_advertisement = common.value("advertisement", true);
  s.min_length = common.value("min_length", std::size_t{5});
  if (j.contains("topics")) {
    for (auto& [name, tj] : j["topics"].items()) {
      TopicRules r;
      r.topic = name;
      r.accept_keywords = tj.value("accept", std::vector<std::string>{});
      r.reject_keywords = tj.value("reject", std::vector<std::string>{});
      s.topics.push_back(std::move(r));
    }
  }
  return s;
}

ClassificationStandard ClassificationStandard::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open standard file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

CompiledStandard::CompiledStandard(const ClassificationStandard& std_, const World& world)
    : reject_advertisement_(std_.reject_advertisement), min_length_(std_.min_length) {
  reject_words_.resize(world.topic_names.size());
  for (std::size_t t = 0; t < world.topic_names.size(); ++t) {
    const TopicRules* rules = std_.rules_for(world.topic_names[t]);
    if (!rules) continue;
    for (const auto& kw : rules->reject_keywords) {
      const WordId w = world.vocab.parse_word(kw);
      if (w < world.vocab.total_words()) reject_words_[t].insert(w);
    }
  }
}

bool CompiledStandard::common_reject(const World& world, const MessageRecord& m) const {
  if (reject_advertisement_ && m.is_advertisement) return true;
  return world.messages.words(m.id).size() < min_length_;
}

bool CompiledStandard::specific_reject(const World& world, const MessageRecord& m,
                                       TopicId pref) const {
  if (pref >= reject_words_.size() || reject_words_[pref].empty()) return false;
  for (WordId w : world.messages.words(m.id))
    if (reject_words_[pref].count(w)) return true;
  return false;
}

Verdict OracleClassifier::classify(const World& world, const MessageRecord& m,
                                   TopicId preference) const {
  if (standard_.common_reject(world, m)) return Verdict::other;
  if (m.topic != preference) return Verdict::other;
  if (standard_.specific_reject(world, m, preference)) return Verdict::other;
  return Verdict::preferred;
}

WordId Vocabulary::parse_word(const std::string& s) const {
  const auto pos = s.rfind("_w");
  if (pos == std::string::npos) return total_;
  const std::string topic = s.substr(0, pos);
  for (TopicId t = 0; t < names_.size(); ++t) {
    if (names_[t] != topic) continue;
    const unsigned long rank = std::strtoul(s.c_str() + pos + 2, nullptr, 10);
    if (rank >= 1 && rank <= sizes_[t]) return word(t, static_cast<std::uint32_t>(rank - 1));
  }
  return total_;
}

}  // namespace polarsim
