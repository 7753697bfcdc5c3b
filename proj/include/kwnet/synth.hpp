#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kwnet/corpus.hpp"
#include "kwnet/lexicon.hpp"

namespace kwnet {

inline constexpr std::size_t kTweetCharLimit = 280;
inline constexpr std::size_t kMarkovHardCap = 400;

/// Nonempty list of distinct lowercase words without whitespace.
class WordList {
 public:
  /// Throws ConfigError if the list is empty or an entry is invalid or repeated.
  explicit WordList(std::vector<std::string> words);

  /// The 200,000-word English list shipped with the library (data/words_en.txt).
  static const WordList& bundled();
  /// Same file format as stop-word lists. Entries are lowercased.
  static WordList parse(std::istream& in);
  static WordList from_file(const std::filesystem::path& path);

  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
};

/// Timestamp of message `index` in synthetic month `month` (0 = 2020-01).
/// Messages are spread evenly over the first 28 days of the month.
Timestamp synthetic_time(std::size_t month, std::size_t index, std::size_t per_month);

/// Pseudo-messages of uniformly drawn words (with replacement). Words are
/// appended while the next draw still fits in 280 characters; the first draw
/// that does not fit ends the message. Throws ConfigError if a word is longer
/// than 280 characters or months/per_month is zero.
Corpus random_tweets(const WordList& words, std::size_t months = 6, std::size_t per_month = 100,
                     std::uint64_t seed = 0);

/// Word-level Markov chain. The end-of-message marker is the empty token.
struct MarkovModel {
  using Context = std::vector<std::string>;

  std::size_t order = 1;
  std::map<Context, std::map<std::string, std::int64_t>> transitions;
  /// Distinct contexts that opened a training message.
  std::vector<Context> start_contexts;

  static bool is_end(const std::string& token) { return token.empty(); }
};

/// Trains on lowercased, whitespace-split text; stop words are kept. Messages
/// shorter than `order` tokens are skipped. Throws ConfigError if order is not
/// 1 or 2 or no message is usable.
MarkovModel markov_train(const Corpus& corpus, std::size_t order = 2);

/// Each message starts from a uniformly drawn start context and follows the
/// chain until the end marker. Once the next token would pass 280 characters,
/// that token is still appended (the message finishes its word) and generation
/// stops, unless it would pass the 400-character hard cap, in which case it is
/// dropped. Throws ConfigError on an untrained model.
Corpus markov_generate(const MarkovModel& model, std::size_t months = 6,
                       std::size_t per_month = 100, std::uint64_t seed = 0);

struct TopicSpec {
  std::size_t topic_count = 5;
  std::size_t vocab_per_topic = 40;
  std::size_t words_per_tweet = 8;
  double cross_topic_noise = 0.02;

  /// Throws ConfigError on zero sizes or noise outside [0, 1).
  void validate() const;
};

struct TopicCorpus {
  Corpus corpus;
  std::map<std::string, std::size_t> ground_truth;  // keyword -> topic
  std::vector<std::vector<std::string>> vocabularies;
};

/// Each message picks a topic uniformly and draws words_per_tweet words from its
/// vocabulary with replacement; each word is independently swapped, with
/// probability cross_topic_noise, for a uniform word of a different topic.
/// Vocabularies are disjoint seeded draws from `words`, restricted to words
/// that are single non-stop-word tokens. Throws ConfigError if there are not
/// enough such words.
TopicCorpus topic_mixture(const TopicSpec& spec, std::size_t months, std::size_t per_month,
                          std::uint64_t seed, const WordList& words = WordList::bundled(),
                          const StopWordList& stopwords = StopWordList::bundled());

}  // namespace kwnet
