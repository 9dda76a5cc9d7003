#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polarsim/classify.hpp"

namespace polarsim {

struct TrainParams {
  unsigned bucket_log2 = 18;  // feature table size 2^18
  unsigned ngram_order = 2;   // unigrams + bigrams
  double learning_rate = 0.1;
  unsigned epochs = 5;
  std::uint64_t seed = 1;
};

struct Prediction {
  std::string label;
  int label_index = -1;
  double confidence = 0.0;  // softmax probability of the argmax class
  bool abstained = false;   // empty token list
};

// Linear softmax model over averaged hashed n-gram features.
class LinearTextModel {
 public:
  LinearTextModel() = default;

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t bucket_count() const { return std::size_t{1} << bucket_log2_; }

  Prediction predict(const std::vector<std::string>& tokens) const;
  std::vector<double> scores(const std::vector<std::string>& tokens) const;

  void save(const std::string& path) const;
  static LinearTextModel load(const std::string& path);

  friend LinearTextModel train_linear(
      const std::vector<std::pair<std::vector<std::string>, std::string>>& corpus,
      const TrainParams& params);

 private:
  void features(const std::vector<std::string>& tokens,
                std::vector<std::uint32_t>& out) const;

  std::vector<std::string> labels_;
  unsigned bucket_log2_ = 18;
  unsigned ngram_order_ = 2;
  std::vector<float> weights_;  // labels x buckets
  std::vector<float> bias_;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SGD on softmax loss; deterministic given params.seed. Requires >= 2 classes
// with >= 50 examples each.
LinearTextModel train_linear(
    const std::vector<std::pair<std::vector<std::string>, std::string>>& corpus,
    const TrainParams& params = {});

// Classifier backend over a trained model: common reject first, then the
// model's label vote. Empty messages abstain to `other`.
class LinearClassifier : public Classifier {
 public:
  LinearClassifier(LinearTextModel model, CompiledStandard standard)
      : model_(std::move(model)), standard_(std::move(standard)) {}

  Verdict classify(const World& world, const MessageRecord& m,
                   TopicId preference) const override;

 private:
  LinearTextModel model_;
  CompiledStandard standard_;
};

}  // namespace polarsim
