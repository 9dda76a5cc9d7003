#include "polarsim/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

namespace polarsim {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'L', 'T', 'M', '0', '0', '1'};

std::uint64_t hash_bytes(const char* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void LinearTextModel::features(const std::vector<std::string>& tokens,
                               std::vector<std::uint32_t>& out) const {
  const std::uint64_t mask = bucket_count() - 1;
  out.clear();
  for (const auto& t : tokens)
    out.push_back(static_cast<std::uint32_t>(hash_bytes(t.data(), t.size()) & mask));
  if (ngram_order_ >= 2) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      std::uint64_t h = hash_bytes(tokens[i].data(), tokens[i].size());
      h = hash_bytes("\x1f", 1, h);
      h = hash_bytes(tokens[i + 1].data(), tokens[i + 1].size(), h);
      out.push_back(static_cast<std::uint32_t>(h & mask));
    }
  }
}

std::vector<double> LinearTextModel::scores(const std::vector<std::string>& tokens) const {
  std::vector<std::uint32_t> feats;
  features(tokens, feats);
  std::vector<double> s(labels_.size());
  for (std::size_t c = 0; c < labels_.size(); ++c) s[c] = bias_[c];
  if (feats.empty()) return s;
  const double inv = 1.0 / static_cast<double>(feats.size());
  for (std::uint32_t f : feats)
    for (std::size_t c = 0; c < labels_.size(); ++c)
      s[c] += inv * weights_[c * bucket_count() + f];
  return s;
}

Prediction LinearTextModel::predict(const std::vector<std::string>& tokens) const {
  Prediction p;
  if (tokens.empty()) {
    p.abstained = true;
    return p;
  }
  auto s = scores(tokens);
  // softmax; argmax ties broken by lowest class index
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    z += v;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < s.size(); ++c)
    if (s[c] > s[best]) best = c;
  p.label_index = static_cast<int>(best);
  p.label = labels_[best];
  p.confidence = s[best] / z;
  return p;
}

LinearTextModel train_linear(
    const std::vector<std::pair<std::vector<std::string>, std::string>>& corpus,
    const TrainParams& params) {
  std::map<std::string, std::size_t> class_counts;
  for (const auto& [tokens, label] : corpus) ++class_counts[label];
  if (class_counts.size() < 2)
    throw TrainingError("training corpus needs at least 2 classes");
  for (const auto& [label, count] : class_counts)
    if (count < 50)
      throw TrainingError("class '" + label + "' has fewer than 50 examples");

  LinearTextModel m;
  m.bucket_log2_ = params.bucket_log2;
  m.ngram_order_ = params.ngram_order;
  for (const auto& [label, count] : class_counts) m.labels_.push_back(label);
  const std::size_t buckets = m.bucket_count();
  const std::size_t classes = m.labels_.size();
  m.weights_.assign(classes * buckets, 0.0f);
  m.bias_.assign(classes, 0.0f);

  std::vector<int> label_of(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    label_of[i] = static_cast<int>(
        std::find(m.labels_.begin(), m.labels_.end(), corpus[i].second) - m.labels_.begin());

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(params.seed, 0x11));
  std::vector<std::uint32_t> feats;
  std::vector<double> s(classes);

  for (unsigned epoch = 0; epoch < params.epochs; ++epoch) {
    // Fisher-Yates with the stable uniform_index helper
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (std::size_t idx : order) {
      const auto& tokens = corpus[idx].first;
      m.features(tokens, feats);
      if (feats.empty()) continue;
      const double inv = 1.0 / static_cast<double>(feats.size());
      for (std::size_t c = 0; c < classes; ++c) s[c] = m.bias_[c];
      for (std::uint32_t f : feats)
        for (std::size_t c = 0; c < classes; ++c)
          s[c] += inv * m.weights_[c * buckets + f];
      const double mx = *std::max_element(s.begin(), s.end());
      double z = 0.0;
      for (auto& v : s) {
        v = std::exp(v - mx);
        z += v;
      }
      for (std::size_t c = 0; c < classes; ++c) {
        const double grad = s[c] / z - (static_cast<int>(c) == label_of[idx] ? 1.0 : 0.0);
        const double step = params.learning_rate * grad;
        m.bias_[c] -= static_cast<float>(step);
        const double fstep = step * inv;
        for (std::uint32_t f : feats)
          m.weights_[c * buckets + f] -= static_cast<float>(fstep);
      }
    }
  }
  return m;
}

void LinearTextModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrainingError("cannot open model file for writing: " + path);
  out.write(kMagic, 8);
  const std::uint32_t nlabels = static_cast<std::uint32_t>(labels_.size());
  const std::uint32_t blog = bucket_log2_;
  const std::uint32_t order = ngram_order_;
  out.write(reinterpret_cast<const char*>(&nlabels), 4);
  out.write(reinterpret_cast<const char*>(&blog), 4);
  out.write(reinterpret_cast<const char*>(&order), 4);
  for (const auto& l : labels_) {
    const std::uint32_t len = static_cast<std::uint32_t>(l.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(l.data(), len);
  }
  out.write(reinterpret_cast<const char*>(bias_.data()),
            static_cast<std::streamsize>(bias_.size() * sizeof(float)));
  out.write(reinterpret_cast<const char*>(weights_.data()),
            static_cast<std::streamsize>(weights_.size() * sizeof(float)));
}

LinearTextModel LinearTextModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TrainingError("cannot open model file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw TrainingError("bad model file magic: " + path);
  LinearTextModel m;
  std::uint32_t nlabels = 0, blog = 0, order = 0;
  in.read(reinterpret_cast<char*>(&nlabels), 4);
  in.read(reinterpret_cast<char*>(&blog), 4);
  in.read(reinterpret_cast<char*>(&order), 4);
  m.bucket_log2_ = blog;
  m.ngram_order_ = order;
  for (std::uint32_t i = 0; i < nlabels; ++i) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    std::string l(len, '\0');
    in.read(l.data(), len);
    m.labels_.push_back(std::move(l));
  }
  m.bias_.resize(nlabels);
  m.weights_.resize(static_cast<std::size_t>(nlabels) * m.bucket_count());
  in.read(reinterpret_cast<char*>(m.bias_.data()),
          static_cast<std::streamsize>(m.bias_.size() * sizeof(float)));
  in.read(reinterpret_cast<char*>(m.weights_.data()),
          static_cast<std::streamsize>(m.weights_.size() * sizeof(float)));
  if (!in) throw TrainingError("truncated model file: " + path);
  return m;
}

Verdict LinearClassifier::classify(const World& world, const MessageRecord& m,
                                   TopicId preference) const {
  if (standard_.common_reject(world, m)) return Verdict::other;
  std::vector<std::string> tokens;
  for (WordId w : world.messages.words(m.id)) tokens.push_back(world.vocab.word_string(w));
  const Prediction p = model_.predict(tokens);
  if (p.abstained) return Verdict::other;
  if (p.label != world.topic_names[preference]) return Verdict::other;
  if (standard_.specific_reject(world, m, preference)) return Verdict::other;
  return Verdict::preferred;
}

}  // namespace polarsim
