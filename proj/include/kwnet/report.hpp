#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kwnet/community.hpp"
#include "kwnet/cooccur.hpp"
#include "kwnet/corpus.hpp"
#include "kwnet/lexicon.hpp"

namespace kwnet {

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisConfig {
  std::string label;  // account or source label
  PeriodKind period = PeriodKind::month;
  std::size_t top_k = kDefaultTopK;
  std::size_t runs = kDefaultRuns;
  std::uint64_t master_seed = 0;
  FilterConfig filter;
  Execution execution = Execution::parallel;

  void validate() const;
};

struct BucketResult {
  BucketKey bucket = BucketKey::month(2020, 1);
  std::size_t tweet_count = 0;
  std::size_t keyword_count = 0;
  std::size_t community_count = 0;  // modal count; 0 when there are no keywords
  std::optional<double> modularity;
  std::int64_t total_weight = 0;
  std::size_t isolated_count = 0;
  std::size_t component_count = 0;
  std::size_t small_component_count = 0;
  std::map<std::size_t, std::size_t> histogram;
  std::vector<std::string> flags;  // no_keywords, no_cooccurrence, disconnected, isolated_vertices

  friend bool operator==(const BucketResult&, const BucketResult&) = default;
};

struct ReportSummary {
  std::size_t bucket_count = 0;
  std::size_t nonempty_bucket_count = 0;
  std::map<std::size_t, std::size_t> distribution;  // community count -> buckets
  std::optional<double> fraction_4_to_6;
  std::optional<std::size_t> min_count;
  std::optional<std::size_t> max_count;
  std::optional<double> median_count;
  std::optional<double> mean_count;

  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

struct RunReport {
  std::string label;
  PeriodKind period = PeriodKind::month;
  std::size_t top_k = kDefaultTopK;
  std::size_t runs = kDefaultRuns;
  std::uint64_t master_seed = 0;
  FilterConfig filter;
  std::string stopword_source;
  std::size_t input_tweets = 0;
  std::size_t kept_tweets = 0;
  std::vector<BucketResult> buckets;
  ReportSummary summary;
};

/// Statistics over buckets with at least one keyword.
ReportSummary summarize(std::span<const BucketResult> buckets);

/// Per-bucket artifacts retained for export.
struct BucketArtifacts {
  BucketKey bucket;
  KeywordGraph graph;
  Partition partition;
};

struct Analysis {
  RunReport report;
  std::vector<BucketArtifacts> artifacts;
};

/// filter -> bucket -> keyword frequencies -> top-K -> graph -> stabilized
/// community count, per bucket in label order. Buckets whose tweets yield no
/// keyword are kept with zero counts and the no_keywords flag.
Analysis analyze(const Corpus& corpus, const AnalysisConfig& config,
                 const StopWordList& stopwords = StopWordList::bundled());

/// Analysis of a single bucket's (already filtered) tweets.
BucketResult analyze_bucket(const BucketKey& key, const Corpus& tweets,
                            const AnalysisConfig& config, const StopWordList& stopwords,
                            BucketArtifacts* artifacts = nullptr);

/// Fraction of buckets with keywords whose community count lies in [lo, hi].
/// Throws ConfigError if lo > hi and Error("no data") if no bucket has keywords.
double fraction_in_range(const RunReport& report, std::size_t lo, std::size_t hi);
double fraction_in_range(std::span<const BucketResult> buckets, std::size_t lo, std::size_t hi);

nlohmann::ordered_json to_json(const RunReport& report);
/// Throws ConfigError on schema mismatch.
RunReport report_from_json(const nlohmann::json& json);

}  // namespace kwnet
