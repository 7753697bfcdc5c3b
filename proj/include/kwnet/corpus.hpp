#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kwnet {

class StopWordList;

using Timestamp = std::chrono::sys_seconds;

/// Parses an instant. Accepted forms:
///   2020-03-14T12:00:00Z, 2020-03-14T12:00:00.123+01:00, 2020-03-14 12:00:00,
///   03-14-2020 12:00:00, Sat Mar 14 12:00:00 +0000 2020.
/// A missing offset means UTC. Fractional seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as YYYY-MM-DDTHH:MM:SSZ.
std::string format_timestamp(Timestamp ts);

struct Tweet {
  std::string id;
  Timestamp created_at{};
  std::string text;
  bool is_retweet = false;
  std::optional<std::string> lang;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// An ordered set of tweets with unique ids, sorted by (created_at, id).
class Corpus {
 public:
  Corpus() = default;

  /// Sorts the tweets. Throws ConfigError on a duplicated id.
  explicit Corpus(std::vector<Tweet> tweets, std::string source = {});

  const std::vector<Tweet>& tweets() const noexcept { return tweets_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return tweets_.size(); }
  bool empty() const noexcept { return tweets_.empty(); }
  auto begin() const noexcept { return tweets_.begin(); }
  auto end() const noexcept { return tweets_.end(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Tweet> tweets_;
  std::string source_;
};

enum class RejectReason { parse, missing_field, bad_field, bad_timestamp, duplicate_id };

std::string_view to_string(RejectReason reason);

struct RejectRecord {
  std::size_t line = 0;  // 1-based; for CSV, the line where the record starts
  RejectReason reason = RejectReason::parse;
  std::string detail;

  friend bool operator==(const RejectRecord&, const RejectRecord&) = default;
};

struct ParseResult {
  Corpus corpus;
  std::vector<RejectRecord> rejects;
};

/// One JSON object per line with at least {id, created_at, text}. Optional
/// is_retweet (default false) and lang (default absent; "" and "und" also mean
/// absent). Unknown fields such as engagement counts are ignored. Blank lines
/// are skipped. Bad lines are rejected, never fatal. If an id repeats, the last
/// occurrence wins. Throws IoError if the stream fails.
ParseResult parse_jsonl(std::istream& in, std::string source = {});

/// Writes the canonical JSONL form: keys id, created_at, text, is_retweet and
/// lang (omitted when absent), one tweet per line.
void write_jsonl(std::ostream& out, const Corpus& corpus);

/// Maps tweet roles onto CSV header names.
struct ColumnMap {
  std::string id = "id";
  std::string text = "text";
  std::string created_at = "date";
  std::string is_retweet = "isRetweet";

  /// Parses overrides of the form "id=tweet_id,created_at=timestamp". Roles are
  /// id, text, created_at, is_retweet. Throws ConfigError on unknown roles.
  static ColumnMap parse(std::string_view spec);
};

/// Header row required. is_retweet values t/true/1 (any case) are true; all
/// else false. lang is always absent. Throws ConfigError if the header lacks a
/// mapped column, IoError if the stream fails.
ParseResult parse_tta_csv(std::istream& in, const ColumnMap& columns = {},
                          std::string source = {});

enum class InputFormat { jsonl, csv };

/// Opens and parses a corpus file. Throws IoError if it cannot be opened.
ParseResult read_corpus_file(const std::filesystem::path& path, InputFormat format,
                             const ColumnMap& columns = {});

struct FilterConfig {
  bool drop_retweets = true;
  bool english_only = true;
  double stopword_ratio_threshold = 0.10;

  /// Throws ConfigError unless the threshold lies in [0, 1].
  void validate() const;
};

/// True if the tweet survives the filter. Language tags match on the primary
/// subtag, so "en-gb" counts as English. Untagged tweets are English when the
/// share of stop-word tokens reaches the threshold; tokenless text is not.
bool passes_filter(const Tweet& tweet, const FilterConfig& config, const StopWordList& stopwords);

Corpus filter_corpus(const Corpus& corpus, const FilterConfig& config,
                     const StopWordList& stopwords);

enum class PeriodKind { month, quarter };

std::string_view to_string(PeriodKind kind);
std::optional<PeriodKind> parse_period_kind(std::string_view text);

/// Calendar bucket. Labels are "YYYY-MM" for months and "YYYY-Qn" for
/// quarters, so label order is chronological.
class BucketKey {
 public:
  static BucketKey month(int year, unsigned month);
  static BucketKey quarter(int year, unsigned quarter);
  static BucketKey containing(Timestamp ts, PeriodKind kind);
  /// Throws ConfigError if `label` does not match the grammar of `kind`.
  static BucketKey parse(PeriodKind kind, std::string_view label);

  PeriodKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const BucketKey&, const BucketKey&) = default;
  friend auto operator<=>(const BucketKey& a, const BucketKey& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    return a.label_ <=> b.label_;
  }

 private:
  BucketKey(PeriodKind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  PeriodKind kind_;
  std::string label_;
};

/// UTC calendar buckets. Empty buckets are not created.
std::map<BucketKey, Corpus> bucket_by_period(const Corpus& corpus, PeriodKind kind);

}  // namespace kwnet
