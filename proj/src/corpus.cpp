#include "kwnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "kwnet/error.hpp"
#include "kwnet/export.hpp"
#include "kwnet/lexicon.hpp"
#include "kwnet/utf8.hpp"

namespace kwnet {
namespace {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

std::optional<std::string> normalize_lang(std::string_view raw) {
  std::string lang = ascii_lower(trim(raw));
  if (lang.empty() || lang == "und") return std::nullopt;
  return lang;
}

// Accumulates parsed tweets; a repeated id replaces the earlier tweet, which
// becomes a reject.
class CorpusBuilder {
 public:
  void add(Tweet tweet, std::size_t line) {
    auto [it, inserted] = index_.try_emplace(tweet.id, entries_.size());
    if (!inserted) {
      Entry& previous = entries_[it->second];
      rejects_.push_back({previous.line, RejectReason::duplicate_id,
                          "id " + previous.tweet.id + " repeated on line " + std::to_string(line)});
      previous = Entry{std::move(tweet), line};
      return;
    }
    entries_.push_back(Entry{std::move(tweet), line});
  }

  void reject(std::size_t line, RejectReason reason, std::string detail) {
    rejects_.push_back({line, reason, std::move(detail)});
  }

  ParseResult finish(std::string source) && {
    std::vector<Tweet> tweets;
    tweets.reserve(entries_.size());
    for (Entry& entry : entries_) tweets.push_back(std::move(entry.tweet));
    std::stable_sort(rejects_.begin(), rejects_.end(),
                     [](const RejectRecord& a, const RejectRecord& b) { return a.line < b.line; });
    return ParseResult{Corpus(std::move(tweets), std::move(source)), std::move(rejects_)};
  }

 private:
  struct Entry {
    Tweet tweet;
    std::size_t line;
  };
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<RejectRecord> rejects_;
};

}  // namespace

Corpus::Corpus(std::vector<Tweet> tweets, std::string source)
    : tweets_(std::move(tweets)), source_(std::move(source)) {
  std::sort(tweets_.begin(), tweets_.end(), [](const Tweet& a, const Tweet& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
  });
  std::vector<std::string_view> ids;
  ids.reserve(tweets_.size());
  for (const Tweet& t : tweets_) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw ConfigError("duplicate tweet id: " + std::string(*dup));
  }
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::parse: return "parse";
    case RejectReason::missing_field: return "missing_field";
    case RejectReason::bad_field: return "bad_field";
    case RejectReason::bad_timestamp: return "bad_timestamp";
    case RejectReason::duplicate_id: return "duplicate_id";
  }
  return "unknown";
}

ParseResult parse_jsonl(std::istream& in, std::string source) {
  using nlohmann::json;
  CorpusBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      builder.reject(line_no, RejectReason::parse, "not a JSON object");
      continue;
    }

    Tweet tweet;
    const auto id = object.find("id");
    if (id == object.end() || id->is_null()) {
      builder.reject(line_no, RejectReason::missing_field, "id");
      continue;
    }
    if (id->is_string()) {
      tweet.id = id->get<std::string>();
    } else if (id->is_number_integer()) {
      tweet.id = id->dump();
    } else {
      builder.reject(line_no, RejectReason::bad_field, "id");
      continue;
    }
    if (tweet.id.empty()) {
      builder.reject(line_no, RejectReason::bad_field, "id is empty");
      continue;
    }

    const auto created = object.find("created_at");
    if (created == object.end() || created->is_null()) {
      builder.reject(line_no, RejectReason::missing_field, "created_at");
      continue;
    }
    const auto instant =
        created->is_string() ? parse_timestamp(created->get<std::string>()) : std::nullopt;
    if (!instant) {
      builder.reject(line_no, RejectReason::bad_timestamp, created->dump());
      continue;
    }
    tweet.created_at = *instant;

    const auto text = object.find("text");
    if (text == object.end() || text->is_null()) {
      builder.reject(line_no, RejectReason::missing_field, "text");
      continue;
    }
    if (!text->is_string()) {
      builder.reject(line_no, RejectReason::bad_field, "text");
      continue;
    }
    tweet.text = text->get<std::string>();

    if (const auto rt = object.find("is_retweet"); rt != object.end() && !rt->is_null()) {
      if (!rt->is_boolean()) {
        builder.reject(line_no, RejectReason::bad_field, "is_retweet");
        continue;
      }
      tweet.is_retweet = rt->get<bool>();
    }
    if (const auto lang = object.find("lang"); lang != object.end() && !lang->is_null()) {
      if (!lang->is_string()) {
        builder.reject(line_no, RejectReason::bad_field, "lang");
        continue;
      }
      tweet.lang = normalize_lang(lang->get<std::string>());
    }
    builder.add(std::move(tweet), line_no);
  }
  if (in.bad()) throw IoError("failed reading JSONL stream");
  return std::move(builder).finish(std::move(source));
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const Tweet& tweet : corpus) {
    nlohmann::ordered_json object;
    object["id"] = tweet.id;
    object["created_at"] = format_timestamp(tweet.created_at);
    object["text"] = tweet.text;
    object["is_retweet"] = tweet.is_retweet;
    if (tweet.lang) object["lang"] = *tweet.lang;
    out << object.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
  if (!out) throw IoError("failed writing JSONL stream");
}

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap map;
  while (!spec.empty()) {
    const std::size_t comma = spec.find(',');
    const std::string_view item = trim(spec.substr(0, comma));
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("column map entry needs role=column: " + std::string(item));
    }
    const std::string_view role = trim(item.substr(0, eq));
    std::string column(trim(item.substr(eq + 1)));
    if (column.empty()) throw ConfigError("empty column name for role " + std::string(role));
    if (role == "id") {
      map.id = std::move(column);
    } else if (role == "text") {
      map.text = std::move(column);
    } else if (role == "created_at") {
      map.created_at = std::move(column);
    } else if (role == "is_retweet") {
      map.is_retweet = std::move(column);
    } else {
      throw ConfigError("unknown column role: " + std::string(role));
    }
  }
  return map;
}

ParseResult parse_tta_csv(std::istream& in, const ColumnMap& columns, std::string source) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) {
    if (in.bad()) throw IoError("failed reading CSV stream");
    throw ConfigError("CSV input has no header row");
  }
  const std::vector<std::string> header = fields;
  const auto column_of = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("CSV header lacks column \"" + name + "\"");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id_col = column_of(columns.id);
  const std::size_t text_col = column_of(columns.text);
  const std::size_t date_col = column_of(columns.created_at);
  const std::size_t rt_col = column_of(columns.is_retweet);

  CorpusBuilder builder;
  for (;;) {
    bool more = false;
    try {
      more = reader.next(fields);
    } catch (const Error& e) {
      builder.reject(reader.record_line(), RejectReason::parse, e.what());
      break;
    }
    if (!more) break;
    const std::size_t line = reader.record_line();
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      builder.reject(line, RejectReason::parse,
                     "expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()));
      continue;
    }
    Tweet tweet;
    tweet.id = std::string(trim(fields[id_col]));
    if (tweet.id.empty()) {
      builder.reject(line, RejectReason::missing_field, "id");
      continue;
    }
    const auto instant = parse_timestamp(fields[date_col]);
    if (!instant) {
      builder.reject(line, RejectReason::bad_timestamp, fields[date_col]);
      continue;
    }
    tweet.created_at = *instant;
    tweet.text = utf8::sanitize(fields[text_col]);
    const std::string rt = ascii_lower(trim(fields[rt_col]));
    tweet.is_retweet = rt == "t" || rt == "true" || rt == "1";
    builder.add(std::move(tweet), line);
  }
  if (in.bad()) throw IoError("failed reading CSV stream");
  return std::move(builder).finish(std::move(source));
}

ParseResult read_corpus_file(const std::filesystem::path& path, InputFormat format,
                             const ColumnMap& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input " + path.string());
  const std::string source = path.string();
  return format == InputFormat::jsonl ? parse_jsonl(in, source)
                                      : parse_tta_csv(in, columns, source);
}

void FilterConfig::validate() const {
  if (!(stopword_ratio_threshold >= 0.0 && stopword_ratio_threshold <= 1.0)) {
    throw ConfigError("stop-word ratio threshold must lie in [0, 1]");
  }
}

bool passes_filter(const Tweet& tweet, const FilterConfig& config,
                   const StopWordList& stopwords) {
  if (config.drop_retweets && tweet.is_retweet) return false;
  if (!config.english_only) return true;
  if (tweet.lang) {
    const std::string& lang = *tweet.lang;
    return lang == "en" || lang.starts_with("en-");
  }
  const std::vector<std::string> tokens = tokenize(tweet.text);
  if (tokens.empty()) return false;
  const auto stop = std::count_if(tokens.begin(), tokens.end(),
                                  [&](const std::string& t) { return stopwords.contains(t); });
  return static_cast<double>(stop) >=
         config.stopword_ratio_threshold * static_cast<double>(tokens.size());
}

Corpus filter_corpus(const Corpus& corpus, const FilterConfig& config,
                     const StopWordList& stopwords) {
  config.validate();
  std::vector<Tweet> kept;
  for (const Tweet& tweet : corpus) {
    if (passes_filter(tweet, config, stopwords)) kept.push_back(tweet);
  }
  return Corpus(std::move(kept), corpus.source());
}

std::string_view to_string(PeriodKind kind) {
  return kind == PeriodKind::month ? "month" : "quarter";
}

std::optional<PeriodKind> parse_period_kind(std::string_view text) {
  if (text == "month") return PeriodKind::month;
  if (text == "quarter") return PeriodKind::quarter;
  return std::nullopt;
}

BucketKey BucketKey::month(int year, unsigned month) {
  if (year < 1 || year > 9999 || month < 1 || month > 12) {
    throw ConfigError("month bucket out of range");
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u", year, month);
  return BucketKey(PeriodKind::month, buffer);
}

BucketKey BucketKey::quarter(int year, unsigned quarter) {
  if (year < 1 || year > 9999 || quarter < 1 || quarter > 4) {
    throw ConfigError("quarter bucket out of range");
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-Q%u", year, quarter);
  return BucketKey(PeriodKind::quarter, buffer);
}

BucketKey BucketKey::containing(Timestamp ts, PeriodKind kind) {
  const std::chrono::year_month_day date{std::chrono::floor<std::chrono::days>(ts)};
  const int year = static_cast<int>(date.year());
  const unsigned month = static_cast<unsigned>(date.month());
  return kind == PeriodKind::month ? BucketKey::month(year, month)
                                   : BucketKey::quarter(year, (month - 1) / 3 + 1);
}

BucketKey BucketKey::parse(PeriodKind kind, std::string_view label) {
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  const auto number = [](std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
  };
  const bool year_ok = label.size() >= 5 && std::all_of(label.begin(), label.begin() + 4, is_digit) &&
                       label[4] == '-';
  if (kind == PeriodKind::month && year_ok && label.size() == 7 && is_digit(label[5]) &&
      is_digit(label[6])) {
    const int m = number(label.substr(5, 2));
    if (m >= 1 && m <= 12) return BucketKey::month(number(label.substr(0, 4)), m);
  }
  if (kind == PeriodKind::quarter && year_ok && label.size() == 7 && label[5] == 'Q' &&
      label[6] >= '1' && label[6] <= '4') {
    return BucketKey::quarter(number(label.substr(0, 4)), label[6] - '0');
  }
  throw ConfigError("invalid " + std::string(to_string(kind)) + " label: " + std::string(label));
}

std::map<BucketKey, Corpus> bucket_by_period(const Corpus& corpus, PeriodKind kind) {
  std::map<BucketKey, std::vector<Tweet>> grouped;
  for (const Tweet& tweet : corpus) {
    grouped[BucketKey::containing(tweet.created_at, kind)].push_back(tweet);
  }
  std::map<BucketKey, Corpus> buckets;
  for (auto& [key, tweets] : grouped) {
    buckets.emplace(key, Corpus(std::move(tweets), corpus.source()));
  }
  return buckets;
}

}  // namespace kwnet
