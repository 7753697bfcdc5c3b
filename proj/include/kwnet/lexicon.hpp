#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwnet/corpus.hpp"

namespace kwnet {

/// Set of lowercase, whitespace-free words excluded from keyword analysis.
class StopWordList {
 public:
  StopWordList() = default;
  /// Entries are lowercased. Throws ConfigError on empty entries or entries
  /// containing whitespace.
  StopWordList(const std::vector<std::string>& words, std::string source);

  /// The list shipped with the library (data/stopwords_en.txt).
  static const StopWordList& bundled();
  /// One word per line, UTF-8, '#' comment lines and blank lines ignored.
  static StopWordList parse(std::istream& in, std::string source);
  static StopWordList from_file(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::set<std::string, std::less<>> words_;
  std::string source_;
};

/// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
std::string lowercase(std::string_view text);

/// Splits message text into lowercase tokens:
///  - URLs (http://, https://, www.) and @-mentions are deleted;
///  - any other non-word character separates tokens, which strips the '#'
///    from hashtags and removes punctuation and emoji;
///  - '-' and apostrophes survive only between two word characters, so
///    "covid-19" stays one token;
///  - a trailing possessive "'s" is removed ("canada's" -> "canada").
/// Word characters are ASCII letters and digits plus Latin, Greek and Cyrillic
/// letters. The output is a fixed point: tokenizing the space-joined tokens
/// yields the same tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Order-preserving removal of stop words.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopWordList& stopwords);

/// tokenize followed by remove_stopwords.
std::vector<std::string> extract_keywords(std::string_view text, const StopWordList& stopwords);

struct KeywordFrequency {
  BucketKey bucket;
  std::map<std::string, std::int64_t, std::less<>> counts;
};

/// Occurrence counts of every keyword over the bucket; a word repeated inside
/// one tweet counts each time.
KeywordFrequency keyword_frequencies(const Corpus& bucket, const StopWordList& stopwords,
                                     const BucketKey& key);

inline constexpr std::size_t kDefaultTopK = 100;

struct Keyword {
  std::string word;
  std::int64_t frequency = 0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

/// Keywords ordered by (frequency desc, word asc), at most `limit` of them.
class KeywordSet {
 public:
  KeywordSet() = default;
  /// Throws ConfigError if entries are duplicated, misordered or exceed limit.
  KeywordSet(std::vector<Keyword> entries, std::size_t limit);

  const std::vector<Keyword>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t limit() const noexcept { return limit_; }
  const Keyword& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

 private:
  std::vector<Keyword> entries_;
  std::size_t limit_ = kDefaultTopK;
};

/// The k most frequent keywords, ties broken by ascending word. Throws
/// ConfigError if k == 0.
KeywordSet top_k(const KeywordFrequency& frequency, std::size_t k = kDefaultTopK);

}  // namespace kwnet
