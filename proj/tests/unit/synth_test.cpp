#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "kwnet/cooccur.hpp"
#include "kwnet/error.hpp"
#include "kwnet/synth.hpp"
#include "kwnet/utf8.hpp"

using namespace kwnet;

namespace {

Corpus corpus_of(const std::vector<std::string>& texts) {
  std::vector<Tweet> tweets;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    tweets.push_back(Tweet{"t" + std::to_string(i), Timestamp{std::chrono::seconds{1583020800 + static_cast<std::int64_t>(i)}},
                           texts[i], false, "en"});
  }
  return Corpus(tweets);
}

std::string dump(const Corpus& c) {
  std::ostringstream out;
  write_jsonl(out, c);
  return out.str();
}

std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace

TEST(WordList, BundledAndValidation) {
  const WordList& words = WordList::bundled();
  EXPECT_GE(words.size(), 10000u);
  std::set<std::string> seen;
  for (const std::string& w : words.words()) {
    ASSERT_FALSE(w.empty());
    ASSERT_EQ(w, lowercase(w));
    ASSERT_TRUE(seen.insert(w).second) << w;
  }
  EXPECT_THROW(WordList({}), ConfigError);
  EXPECT_THROW(WordList({"a", "A"}), ConfigError);
  EXPECT_THROW(WordList({"a b"}), ConfigError);
  std::istringstream in("# header\nAlpha\nbeta\n");
  EXPECT_EQ(WordList::parse(in).words(), (std::vector<std::string>{"alpha", "beta"}));
}

TEST(SyntheticTime, MonthsFrom2020) {
  EXPECT_EQ(format_timestamp(synthetic_time(0, 0, 100)), "2020-01-01T00:00:00Z");
  EXPECT_EQ(BucketKey::containing(synthetic_time(5, 99, 100), PeriodKind::month).label(), "2020-06");
  EXPECT_EQ(BucketKey::containing(synthetic_time(12, 0, 1), PeriodKind::month).label(), "2021-01");
}

TEST(RandomTweets, ShapeAndLimits) {
  const Corpus c = random_tweets(WordList::bundled(), 6, 100, 7);
  ASSERT_EQ(c.size(), 600u);
  const auto buckets = bucket_by_period(c, PeriodKind::month);
  ASSERT_EQ(buckets.size(), 6u);
  EXPECT_EQ(buckets.begin()->first.label(), "2020-01");
  for (const auto& [key, part] : buckets) EXPECT_EQ(part.size(), 100u);

  std::set<std::string> vocabulary(WordList::bundled().words().begin(), WordList::bundled().words().end());
  for (const Tweet& t : c) {
    EXPECT_LE(utf8::length(t.text), kTweetCharLimit);
    const auto words = words_of(t.text);
    ASSERT_GE(words.size(), 1u);
    for (const std::string& w : words) EXPECT_TRUE(vocabulary.contains(w)) << w;
    EXPECT_FALSE(t.is_retweet);
    EXPECT_EQ(t.lang, "en");
  }
  EXPECT_EQ(dump(c), dump(random_tweets(WordList::bundled(), 6, 100, 7)));
  EXPECT_NE(dump(c), dump(random_tweets(WordList::bundled(), 6, 100, 8)));
}

TEST(RandomTweets, Errors) {
  EXPECT_THROW(random_tweets(WordList({std::string(281, 'x')}), 1, 1, 0), ConfigError);
  EXPECT_THROW(random_tweets(WordList({"a"}), 0, 1, 0), ConfigError);
  // A 280-character word fits exactly once.
  const Corpus c = random_tweets(WordList({std::string(280, 'x')}), 1, 2, 0);
  for (const Tweet& t : c) EXPECT_EQ(t.text.size(), 280u);
}

TEST(Markov, TrainCountsOrderOne) {
  const MarkovModel m = markov_train(corpus_of({"a b c"}), 1);
  EXPECT_EQ(m.order, 1u);
  using Next = std::map<std::string, std::int64_t>;
  EXPECT_EQ(m.transitions.size(), 3u);
  EXPECT_EQ(m.transitions.at({"a"}), (Next{{"b", 1}}));
  EXPECT_EQ(m.transitions.at({"b"}), (Next{{"c", 1}}));
  EXPECT_EQ(m.transitions.at({"c"}), (Next{{"", 1}}));
  EXPECT_EQ(m.start_contexts, (std::vector<MarkovModel::Context>{{"a"}}));
}

TEST(Markov, Errors) {
  EXPECT_THROW(markov_train(corpus_of({"a b"}), 3), ConfigError);
  EXPECT_THROW(markov_train(corpus_of({"", "   "}), 1), ConfigError);
  EXPECT_THROW(markov_train(corpus_of({"single"}), 2), ConfigError);
  EXPECT_THROW(markov_generate(MarkovModel{}, 1, 1, 0), ConfigError);
}

TEST(Markov, RepeatedSentenceIsReproduced) {
  const std::string sentence = "the quick brown fox jumps over the lazy dog";
  const MarkovModel m = markov_train(corpus_of(std::vector<std::string>(50, sentence)), 2);
  const Corpus out = markov_generate(m, 2, 10, 3);
  ASSERT_EQ(out.size(), 20u);
  for (const Tweet& t : out) EXPECT_EQ(t.text, sentence);
}

TEST(Markov, ClosureCapsAndDeterminism) {
  const std::vector<std::string> training = {
      "We will make America great again and we will win",
      "The economy is strong and getting stronger every day",
      "We will win the vote and the economy will be strong",
      "Stay home stay safe and we will beat this together"};
  std::set<std::string> seen;
  for (const std::string& t : training) {
    for (const std::string& w : words_of(lowercase(t))) seen.insert(w);
  }
  for (std::size_t order : {1u, 2u}) {
    const MarkovModel m = markov_train(corpus_of(training), order);
    const Corpus out = markov_generate(m, 3, 50, 11);
    ASSERT_EQ(out.size(), 150u);
    for (const Tweet& t : out) {
      EXPECT_LE(utf8::length(t.text), kMarkovHardCap);
      for (const std::string& w : words_of(t.text)) EXPECT_TRUE(seen.contains(w)) << w;
    }
    EXPECT_EQ(dump(out), dump(markov_generate(m, 3, 50, 11)));
  }
}

TEST(Markov, SoftLimitFinishesTheWord) {
  // A chain that never ends: every message runs into the soft limit.
  const MarkovModel m = markov_train(corpus_of({"loop loop loop loop loop"}), 1);
  const MarkovModel::Context loop{"loop"};
  MarkovModel endless = m;
  endless.transitions[loop].erase("");
  const Corpus out = markov_generate(endless, 1, 5, 1);
  for (const Tweet& t : out) {
    const std::size_t len = utf8::length(t.text);
    EXPECT_GT(len, kTweetCharLimit);
    EXPECT_LE(len, kTweetCharLimit + 1 + 4);
    EXPECT_EQ(t.text.substr(t.text.size() - 4), "loop");
  }

  // A token so long it would break the hard cap is dropped.
  const std::string huge(200, 'z');
  MarkovModel longwords;
  longwords.order = 1;
  longwords.start_contexts = {{huge}};
  longwords.transitions[{huge}][huge] = 1;
  for (const Tweet& t : markov_generate(longwords, 1, 3, 1)) {
    EXPECT_LE(utf8::length(t.text), kMarkovHardCap);
    EXPECT_EQ(t.text, huge);
  }
}

TEST(TopicMixture, NoiseFreeTweetsStayInOneTopic) {
  const TopicSpec spec{4, 10, 6, 0.0};
  const TopicCorpus tc = topic_mixture(spec, 2, 200, 5);
  ASSERT_EQ(tc.corpus.size(), 400u);
  ASSERT_EQ(tc.vocabularies.size(), 4u);
  ASSERT_EQ(tc.ground_truth.size(), 40u);
  for (std::size_t t = 0; t < 4; ++t) {
    for (const std::string& w : tc.vocabularies[t]) EXPECT_EQ(tc.ground_truth.at(w), t);
  }
  for (const Tweet& tweet : tc.corpus) {
    const auto words = words_of(tweet.text);
    ASSERT_EQ(words.size(), 6u);
    std::set<std::size_t> topics;
    for (const std::string& w : words) topics.insert(tc.ground_truth.at(w));
    EXPECT_EQ(topics.size(), 1u);
  }

  // Components of the keyword graph never straddle topics.
  const StopWordList& sw = StopWordList::bundled();
  for (const auto& [key, bucket] : bucket_by_period(tc.corpus, PeriodKind::month)) {
    const KeywordGraph g = build_graph(bucket, top_k(keyword_frequencies(bucket, sw, key), 100), sw, key);
    const auto comp = connected_components(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (comp[i] == comp[j]) { EXPECT_EQ(tc.ground_truth.at(g.keyword(i)), tc.ground_truth.at(g.keyword(j))); }
      }
    }
  }
}

TEST(TopicMixture, KeywordsSurviveThePipelineAndDeterminism) {
  const TopicCorpus a = topic_mixture(TopicSpec{}, 1, 50, 9);
  const TopicCorpus b = topic_mixture(TopicSpec{}, 1, 50, 9);
  EXPECT_EQ(dump(a.corpus), dump(b.corpus));
  EXPECT_EQ(a.ground_truth, b.ground_truth);
  const StopWordList& sw = StopWordList::bundled();
  for (const Tweet& t : a.corpus) {
    EXPECT_EQ(extract_keywords(t.text, sw), words_of(t.text));
  }
  EXPECT_THROW(topic_mixture(TopicSpec{2, 2, 1, 0.0}, 1, 1, 0, WordList({"a1", "b1", "c1"})), ConfigError);
  EXPECT_THROW(topic_mixture(TopicSpec{0, 2, 1, 0.0}, 1, 1, 0), ConfigError);
  EXPECT_THROW(topic_mixture(TopicSpec{2, 2, 1, 1.0}, 1, 1, 0), ConfigError);
}

TEST(TopicMixture, NoiseCrossesTopics) {
  const TopicCorpus tc = topic_mixture(TopicSpec{3, 20, 10, 0.5}, 1, 200, 2);
  std::size_t mixed = 0;
  for (const Tweet& tweet : tc.corpus) {
    std::set<std::size_t> topics;
    for (const std::string& w : words_of(tweet.text)) topics.insert(tc.ground_truth.at(w));
    mixed += topics.size() > 1 ? 1 : 0;
  }
  EXPECT_GT(mixed, 150u);
}
