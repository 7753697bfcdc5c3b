#include "kwnet/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "kwnet/error.hpp"
#include "kwnet/random.hpp"
#include "kwnet/utf8.hpp"
#include "resources.hpp"

namespace kwnet {
namespace {

std::string synthetic_id(const char* prefix, std::size_t month, std::size_t index) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%s-%03zu-%06zu", prefix, month, index);
  return buffer;
}

Tweet synthetic_tweet(const char* prefix, std::size_t month, std::size_t index,
                      std::size_t per_month, std::string text) {
  Tweet tweet;
  tweet.id = synthetic_id(prefix, month, index);
  tweet.created_at = synthetic_time(month, index, per_month);
  tweet.text = std::move(text);
  tweet.is_retweet = false;
  tweet.lang = "en";
  return tweet;
}

void require_positive(std::size_t months, std::size_t per_month) {
  if (months == 0 || per_month == 0) throw ConfigError("months and per_month must be positive");
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

std::string truncate_chars(std::string_view text, std::size_t limit) {
  std::size_t pos = 0;
  for (std::size_t n = 0; n < limit && pos < text.size(); ++n) utf8::decode(text, pos);
  return std::string(text.substr(0, pos));
}

WordList parse_lines(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.back()))) view.remove_suffix(1);
    while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front()))) view.remove_prefix(1);
    if (view.empty() || view.front() == '#') continue;
    words.emplace_back(view);
  }
  if (in.bad()) throw IoError("failed reading word list");
  return WordList(std::move(words));
}

}  // namespace

WordList::WordList(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) throw ConfigError("word list is empty");
  for (std::string& word : words_) {
    if (word.empty()) throw ConfigError("word list contains an empty entry");
    if (std::any_of(word.begin(), word.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      throw ConfigError("word list entry contains whitespace: \"" + word + "\"");
    }
    word = lowercase(word);
  }
  std::vector<std::string_view> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw ConfigError("word list repeats \"" + std::string(*dup) + "\"");
  }
}

const WordList& WordList::bundled() {
  static const WordList list = [] {
    std::istringstream in{std::string(resources::words_en)};
    return parse_lines(in);
  }();
  return list;
}

WordList WordList::parse(std::istream& in) { return parse_lines(in); }

WordList WordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open word list " + path.string());
  return parse_lines(in);
}

Timestamp synthetic_time(std::size_t month, std::size_t index, std::size_t per_month) {
  using namespace std::chrono;
  const int y = 2020 + static_cast<int>(month / 12);
  const unsigned m = static_cast<unsigned>(month % 12) + 1;
  const sys_days start{year{y} / std::chrono::month{m} / day{1}};
  const std::int64_t spacing = 28 * 86400 / static_cast<std::int64_t>(std::max<std::size_t>(per_month, 1));
  return Timestamp{start} + seconds{spacing * static_cast<std::int64_t>(index)};
}

Corpus random_tweets(const WordList& words, std::size_t months, std::size_t per_month,
                     std::uint64_t seed) {
  require_positive(months, per_month);
  std::vector<std::size_t> lengths;
  lengths.reserve(words.size());
  for (const std::string& word : words.words()) {
    lengths.push_back(utf8::length(word));
    if (lengths.back() > kTweetCharLimit) {
      throw ConfigError("word longer than " + std::to_string(kTweetCharLimit) + " characters");
    }
  }

  Rng rng(seed);
  std::vector<Tweet> tweets;
  tweets.reserve(months * per_month);
  for (std::size_t month = 0; month < months; ++month) {
    for (std::size_t i = 0; i < per_month; ++i) {
      std::string text;
      std::size_t length = 0;
      for (;;) {
        const std::size_t pick = rng.below(words.size());
        const std::size_t next = length + (text.empty() ? 0 : 1) + lengths[pick];
        if (next > kTweetCharLimit) break;
        if (!text.empty()) text.push_back(' ');
        text += words.words()[pick];
        length = next;
      }
      tweets.push_back(synthetic_tweet("random", month, i, per_month, std::move(text)));
    }
  }
  return Corpus(std::move(tweets), "synth:random");
}

MarkovModel markov_train(const Corpus& corpus, std::size_t order) {
  if (order != 1 && order != 2) throw ConfigError("Markov order must be 1 or 2");
  MarkovModel model;
  model.order = order;
  std::set<MarkovModel::Context> starts;
  for (const Tweet& tweet : corpus) {
    const std::vector<std::string> tokens = split_whitespace(lowercase(tweet.text));
    if (tokens.size() < order) continue;
    starts.emplace(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(order));
    for (std::size_t i = order; i <= tokens.size(); ++i) {
      MarkovModel::Context context(tokens.begin() + static_cast<std::ptrdiff_t>(i - order),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i));
      const std::string next = i < tokens.size() ? tokens[i] : std::string{};
      ++model.transitions[std::move(context)][next];
    }
  }
  if (starts.empty()) throw ConfigError("no usable training text for the Markov model");
  model.start_contexts.assign(starts.begin(), starts.end());
  return model;
}

Corpus markov_generate(const MarkovModel& model, std::size_t months, std::size_t per_month,
                       std::uint64_t seed) {
  require_positive(months, per_month);
  if (model.start_contexts.empty() || (model.order != 1 && model.order != 2)) {
    throw ConfigError("Markov model is not trained");
  }

  Rng rng(seed);
  std::vector<Tweet> tweets;
  tweets.reserve(months * per_month);
  for (std::size_t month = 0; month < months; ++month) {
    for (std::size_t i = 0; i < per_month; ++i) {
      MarkovModel::Context context = model.start_contexts[rng.below(model.start_contexts.size())];
      std::string text;
      std::size_t length = 0;
      // Returns false once generation must stop.
      const auto append = [&](const std::string& token) {
        const std::size_t next = length + (text.empty() ? 0 : 1) + utf8::length(token);
        if (next > kMarkovHardCap) return false;
        if (!text.empty()) text.push_back(' ');
        text += token;
        length = next;
        return next <= kTweetCharLimit;
      };

      bool open = true;
      for (const std::string& token : context) {
        if (!(open = append(token))) break;
      }
      while (open) {
        const auto it = model.transitions.find(context);
        if (it == model.transitions.end()) break;
        std::int64_t total = 0;
        for (const auto& [token, count] : it->second) total += count;
        std::int64_t pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        const std::string* chosen = nullptr;
        for (const auto& [token, count] : it->second) {
          if (pick < count) {
            chosen = &token;
            break;
          }
          pick -= count;
        }
        if (MarkovModel::is_end(*chosen)) break;
        open = append(*chosen);
        context.erase(context.begin());
        context.push_back(*chosen);
      }
      if (text.empty()) text = truncate_chars(context.front(), kMarkovHardCap);
      tweets.push_back(synthetic_tweet("markov", month, i, per_month, std::move(text)));
    }
  }
  return Corpus(std::move(tweets), "synth:markov");
}

void TopicSpec::validate() const {
  if (topic_count == 0 || vocab_per_topic == 0 || words_per_tweet == 0) {
    throw ConfigError("topic count, vocabulary size and words per tweet must be positive");
  }
  if (!(cross_topic_noise >= 0.0 && cross_topic_noise < 1.0)) {
    throw ConfigError("cross-topic noise must lie in [0, 1)");
  }
}

TopicCorpus topic_mixture(const TopicSpec& spec, std::size_t months, std::size_t per_month,
                          std::uint64_t seed, const WordList& words,
                          const StopWordList& stopwords) {
  spec.validate();
  require_positive(months, per_month);
  Rng rng(seed);

  // Partial Fisher-Yates over the word list, keeping words that pass through
  // tokenization unchanged and are not stop words.
  const std::size_t needed = spec.topic_count * spec.vocab_per_topic;
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::string> chosen;
  chosen.reserve(needed);
  for (std::size_t i = 0; i < order.size() && chosen.size() < needed; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
    const std::string& word = words.words()[order[i]];
    const std::vector<std::string> tokens = tokenize(word);
    if (tokens.size() == 1 && tokens[0] == word && !stopwords.contains(word)) chosen.push_back(word);
  }
  if (chosen.size() < needed) {
    throw ConfigError("word list has only " + std::to_string(chosen.size()) +
                      " usable words, topic mixture needs " + std::to_string(needed));
  }

  TopicCorpus result;
  result.vocabularies.resize(spec.topic_count);
  for (std::size_t t = 0; t < spec.topic_count; ++t) {
    for (std::size_t v = 0; v < spec.vocab_per_topic; ++v) {
      std::string& word = chosen[t * spec.vocab_per_topic + v];
      result.ground_truth.emplace(word, t);
      result.vocabularies[t].push_back(std::move(word));
    }
  }

  std::vector<Tweet> tweets;
  tweets.reserve(months * per_month);
  for (std::size_t month = 0; month < months; ++month) {
    for (std::size_t i = 0; i < per_month; ++i) {
      const std::size_t topic = rng.below(spec.topic_count);
      std::string text;
      for (std::size_t w = 0; w < spec.words_per_tweet; ++w) {
        std::size_t source = topic;
        const std::size_t pick = rng.below(spec.vocab_per_topic);
        if (spec.topic_count > 1 && rng.bernoulli(spec.cross_topic_noise)) {
          source = rng.below(spec.topic_count - 1);
          if (source >= topic) ++source;
        }
        if (!text.empty()) text.push_back(' ');
        text += result.vocabularies[source][source == topic ? pick : rng.below(spec.vocab_per_topic)];
      }
      tweets.push_back(synthetic_tweet("topics", month, i, per_month, std::move(text)));
    }
  }
  result.corpus = Corpus(std::move(tweets), "synth:topics");
  return result;
}

}  // namespace kwnet
