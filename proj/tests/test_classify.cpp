#include "doctest.h"

#include "polarsim/classify.hpp"
#include "polarsim/linear_model.hpp"
#include "polarsim/worldgen.hpp"

#include <cstdio>

using namespace polarsim;

namespace {

World words_world() {
  World w;
  w.topic_names = {"alpha", "beta"};
  w.vocab.add_topic("alpha", 100);
  w.vocab.add_topic("beta", 100);
  w.users = {{0, 0, 0.0, 0.0}};
  w.graph.resize(1);
  w.messages.set_author_count(1);
  return w;
}

MessageId add_message(World& w, TopicId topic, std::vector<WordId> words, bool ad = false) {
  MessageRecord m;
  m.author = 0;
  m.origin_author = 0;
  m.topic = topic;
  m.is_advertisement = ad;
  return w.messages.append(m, std::move(words));
}

const char* kStandard = R"({
  "common_reject": {"advertisement": true, "min_length": 3},
  "topics": {
    "alpha": {"accept": ["alpha_w1"], "reject": ["alpha_w7"]},
    "beta": {"accept": ["beta_w1"], "reject": []}
  }
})";

}  // namespace

TEST_CASE("vocabulary word strings round-trip") {
  World w = words_world();
  const WordId first_beta = w.vocab.word(1, 0);
  CHECK(w.vocab.word_string(first_beta) == "beta_w1");
  CHECK(w.vocab.parse_word("beta_w1") == first_beta);
  CHECK(w.vocab.parse_word("alpha_w100") == w.vocab.word(0, 99));
  CHECK(w.vocab.parse_word("alpha_w101") == w.vocab.total_words());  // out of range
  CHECK(w.vocab.parse_word("gamma_w1") == w.vocab.total_words());
  CHECK(w.vocab.parse_word("noise") == w.vocab.total_words());
  CHECK(w.vocab.topic_of(first_beta) == 1);
}

TEST_CASE("oracle classifier applies reject blocks in order") {
  World w = words_world();
  const auto standard = ClassificationStandard::from_json_text(kStandard);
  const OracleClassifier clf(CompiledStandard(standard, w));

  const WordId a0 = w.vocab.word(0, 0), a6 = w.vocab.word(0, 6);
  const auto ok = add_message(w, 0, {a0, a0, a0, a0});
  const auto ad = add_message(w, 0, {a0, a0, a0, a0}, true);
  const auto tiny = add_message(w, 0, {a0, a0});
  const auto rejected = add_message(w, 0, {a0, a6, a0, a0});  // alpha_w7 on board
  const auto beta_msg = add_message(w, 1, {w.vocab.word(1, 0), a0, a0, a0});

  auto verdict = [&](MessageId id, TopicId pref) {
    return clf.classify(w, w.messages.get(id), pref);
  };
  CHECK(verdict(ok, 0) == Verdict::preferred);
  CHECK(verdict(ok, 1) == Verdict::other);        // wrong topic
  CHECK(verdict(ad, 0) == Verdict::other);        // common reject: advertisement
  CHECK(verdict(tiny, 0) == Verdict::other);      // common reject: min length
  CHECK(verdict(rejected, 0) == Verdict::other);  // specific reject keyword
  CHECK(verdict(beta_msg, 1) == Verdict::preferred);
}

TEST_CASE("standard defaults are permissive") {
  World w = words_world();
  const auto standard = ClassificationStandard::from_json_text("{}");
  CHECK(standard.min_length == 5);
  CHECK(standard.reject_advertisement);
  CHECK(standard.rules_for("alpha") == nullptr);
}

TEST_CASE("linear model learns separable synthetic topics") {
  // Two vocabularies with disjoint tokens are trivially separable; the model
  // must get there deterministically and survive a save/load round trip.
  std::vector<std::pair<std::vector<std::string>, std::string>> corpus;
  Rng rng(17);
  for (int i = 0; i < 120; ++i) {
    std::vector<std::string> a, b;
    for (int k = 0; k < 10; ++k) {
      a.push_back("alpha_w" + std::to_string(1 + uniform_index(rng, 40)));
      b.push_back("beta_w" + std::to_string(1 + uniform_index(rng, 40)));
    }
    corpus.emplace_back(a, "alpha");
    corpus.emplace_back(b, "beta");
  }
  TrainParams params;
  params.seed = 3;
  const auto model = train_linear(corpus, params);
  int correct = 0;
  for (const auto& [tokens, label] : corpus)
    if (model.predict(tokens).label == label) ++correct;
  CHECK(correct > static_cast<int>(corpus.size() * 95 / 100));
  CHECK(model.predict({}).abstained);

  const std::string path = "/tmp/polarsim_model_test.bin";
  model.save(path);
  const auto loaded = LinearTextModel::load(path);
  for (int i = 0; i < 20; ++i) {
    const auto& tokens = corpus[static_cast<std::size_t>(i)].first;
    CHECK(loaded.predict(tokens).label == model.predict(tokens).label);
    CHECK(loaded.scores(tokens) == model.scores(tokens));
  }
  std::remove(path.c_str());
}

TEST_CASE("training rejects underpowered corpora") {
  std::vector<std::pair<std::vector<std::string>, std::string>> corpus;
  for (int i = 0; i < 10; ++i) corpus.emplace_back(std::vector<std::string>{"x"}, "only");
  CHECK_THROWS_AS(train_linear(corpus), TrainingError);
}
