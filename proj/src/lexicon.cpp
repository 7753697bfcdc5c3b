#include "kwnet/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "kwnet/error.hpp"
#include "kwnet/utf8.hpp"
#include "resources.hpp"

namespace kwnet {
namespace {

bool is_space(char32_t cp) {
  return cp <= 0x20 || cp == 0x7F || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200B) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
         cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool is_ascii_alnum(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) return is_ascii_alnum(cp);
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x300 && cp <= 0x36F) return true;  // combining diacritics
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387 && cp != 0x375;
  return cp >= 0x400 && cp <= 0x4FF;
}

bool is_joiner(char32_t cp) { return cp == '-' || cp == '\'' || cp == 0x2019; }

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp % 2 == 0 ? cp + 1 : cp;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1 ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0 ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return cp % 2 == 1 ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

std::vector<char32_t> decode_all(std::string_view text) {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) cps.push_back(utf8::decode(text, pos));
  return cps;
}

bool starts_with_ci(std::span<const char32_t> cps, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > cps.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (to_lower(cps[at + i]) != static_cast<unsigned char>(prefix[i])) return false;
  }
  return true;
}

bool is_mention_char(char32_t cp) { return is_ascii_alnum(cp) || cp == '_'; }

// Splits one whitespace-free chunk into tokens, appending to `out`.
void tokenize_chunk(std::span<const char32_t> chunk, std::vector<std::string>& out) {
  // Deleted code points become separators.
  std::vector<char32_t> cps(chunk.begin(), chunk.end());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const bool boundary = i == 0 || !is_word_char(cps[i - 1]);
    if (boundary && (starts_with_ci(cps, i, "http://") || starts_with_ci(cps, i, "https://") ||
                     starts_with_ci(cps, i, "www."))) {
      cps.resize(i);
      break;
    }
    if (cps[i] == '@' || cps[i] == 0xFF20) {
      cps[i] = ' ';
      for (std::size_t j = i + 1; j < cps.size() && is_mention_char(cps[j]); ++j) cps[j] = ' ';
    }
  }

  std::string token;
  const auto flush = [&] {
    while (token.size() > 2 && token.ends_with("'s")) token.resize(token.size() - 2);
    if (!token.empty()) out.push_back(std::move(token));
    token.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_word_char(cp)) {
      utf8::append(token, to_lower(cp));
    } else if (is_joiner(cp) && !token.empty() && i + 1 < cps.size() && is_word_char(cps[i + 1])) {
      token.push_back(cp == '-' ? '-' : '\'');
    } else {
      flush();
    }
  }
  flush();
}

StopWordList parse_word_lines(std::istream& in, std::string source) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    while (!view.empty() && is_space(static_cast<unsigned char>(view.back()))) view.remove_suffix(1);
    while (!view.empty() && is_space(static_cast<unsigned char>(view.front()))) view.remove_prefix(1);
    if (view.empty() || view.front() == '#') continue;
    words.emplace_back(view);
  }
  if (in.bad()) throw IoError("failed reading word list " + source);
  return StopWordList(words, std::move(source));
}

}  // namespace

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) utf8::append(out, to_lower(utf8::decode(text, pos)));
  return out;
}

StopWordList::StopWordList(const std::vector<std::string>& words, std::string source)
    : source_(std::move(source)) {
  for (const std::string& word : words) {
    if (word.empty()) throw ConfigError("empty stop word in " + source_);
    const auto cps = decode_all(word);
    if (std::any_of(cps.begin(), cps.end(), is_space)) {
      throw ConfigError("stop word contains whitespace: \"" + word + "\"");
    }
    words_.insert(lowercase(word));
  }
}

const StopWordList& StopWordList::bundled() {
  static const StopWordList list = [] {
    std::istringstream in{std::string(resources::stopwords_en)};
    return parse_word_lines(in, "bundled:stopwords_en");
  }();
  return list;
}

StopWordList StopWordList::parse(std::istream& in, std::string source) {
  return parse_word_lines(in, std::move(source));
}

StopWordList StopWordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stop-word file " + path.string());
  return parse_word_lines(in, path.string());
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::vector<char32_t> cps = decode_all(text);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (i == cps.size() || is_space(cps[i])) {
      if (i > start) tokenize_chunk(std::span(cps).subspan(start, i - start), tokens);
      start = i + 1;
    }
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopWordList& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (!stopwords.contains(token)) kept.push_back(token);
  }
  return kept;
}

std::vector<std::string> extract_keywords(std::string_view text, const StopWordList& stopwords) {
  return remove_stopwords(tokenize(text), stopwords);
}

KeywordFrequency keyword_frequencies(const Corpus& bucket, const StopWordList& stopwords,
                                     const BucketKey& key) {
  KeywordFrequency frequency{key, {}};
  for (const Tweet& tweet : bucket) {
    for (std::string& word : extract_keywords(tweet.text, stopwords)) {
      auto it = frequency.counts.find(word);
      if (it == frequency.counts.end()) {
        frequency.counts.emplace(std::move(word), 1);
      } else {
        ++it->second;
      }
    }
  }
  return frequency;
}

namespace {

bool ranks_before(const Keyword& a, const Keyword& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.word < b.word;
}

}  // namespace

KeywordSet::KeywordSet(std::vector<Keyword> entries, std::size_t limit)
    : entries_(std::move(entries)), limit_(limit) {
  if (limit_ == 0) throw ConfigError("keyword limit must be positive");
  if (entries_.size() > limit_) throw ConfigError("more keywords than the limit");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].word.empty()) throw ConfigError("empty keyword");
    if (i > 0 && !ranks_before(entries_[i - 1], entries_[i])) {
      throw ConfigError("keywords not in (frequency desc, word asc) order or duplicated: " +
                        entries_[i].word);
    }
  }
}

KeywordSet top_k(const KeywordFrequency& frequency, std::size_t k) {
  if (k == 0) throw ConfigError("top-k requires k >= 1");
  std::vector<Keyword> all;
  all.reserve(frequency.counts.size());
  for (const auto& [word, count] : frequency.counts) all.push_back({word, count});
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    ranks_before);
  all.resize(keep);
  return KeywordSet(std::move(all), k);
}

}  // namespace kwnet
