#include "kwnet/report.hpp"

#include <algorithm>

#include "kwnet/error.hpp"

namespace kwnet {

void AnalysisConfig::validate() const {
  if (top_k == 0) throw ConfigError("top-k must be positive");
  if (runs == 0) throw ConfigError("runs must be positive");
  filter.validate();
}

BucketResult analyze_bucket(const BucketKey& key, const Corpus& tweets,
                            const AnalysisConfig& config, const StopWordList& stopwords,
                            BucketArtifacts* artifacts) {
  BucketResult result;
  result.bucket = key;
  result.tweet_count = tweets.size();

  const KeywordSet keywords = top_k(keyword_frequencies(tweets, stopwords, key), config.top_k);
  result.keyword_count = keywords.size();
  if (keywords.empty()) {
    result.flags.emplace_back("no_keywords");
    if (artifacts) *artifacts = BucketArtifacts{key, KeywordGraph({}, {}, {}, key), Partition()};
    return result;
  }

  KeywordGraph graph = build_graph(tweets, keywords, stopwords, key);
  const ComponentSummary components = summarize_components(graph);
  result.total_weight = graph.total_weight();
  result.isolated_count = components.isolated_count;
  result.component_count = components.component_count;
  result.small_component_count = components.small_component_count;

  StabilizedResult stable = stabilized_count(graph, config.runs, config.master_seed, config.execution);
  result.community_count = stable.modal_count;
  result.modularity = stable.representative_modularity;
  result.histogram = stable.count_histogram;

  if (graph.total_weight() == 0) result.flags.emplace_back("no_cooccurrence");
  if (components.component_count > 1) result.flags.emplace_back("disconnected");
  if (components.isolated_count > 0) result.flags.emplace_back("isolated_vertices");

  if (artifacts) {
    *artifacts = BucketArtifacts{key, std::move(graph), std::move(stable.representative)};
  }
  return result;
}

Analysis analyze(const Corpus& corpus, const AnalysisConfig& config,
                 const StopWordList& stopwords) {
  config.validate();
  Analysis analysis;
  RunReport& report = analysis.report;
  report.label = config.label;
  report.period = config.period;
  report.top_k = config.top_k;
  report.runs = config.runs;
  report.master_seed = config.master_seed;
  report.filter = config.filter;
  report.stopword_source = stopwords.source();
  report.input_tweets = corpus.size();

  const Corpus kept = filter_corpus(corpus, config.filter, stopwords);
  report.kept_tweets = kept.size();
  for (const auto& [key, tweets] : bucket_by_period(kept, config.period)) {
    BucketArtifacts artifacts{key, {}, {}};
    report.buckets.push_back(analyze_bucket(key, tweets, config, stopwords, &artifacts));
    analysis.artifacts.push_back(std::move(artifacts));
  }
  report.summary = summarize(report.buckets);
  return analysis;
}

ReportSummary summarize(std::span<const BucketResult> buckets) {
  ReportSummary summary;
  summary.bucket_count = buckets.size();
  std::vector<std::size_t> counts;
  for (const BucketResult& bucket : buckets) {
    if (bucket.keyword_count == 0) continue;
    counts.push_back(bucket.community_count);
    ++summary.distribution[bucket.community_count];
  }
  summary.nonempty_bucket_count = counts.size();
  if (counts.empty()) return summary;

  std::sort(counts.begin(), counts.end());
  summary.fraction_4_to_6 = fraction_in_range(buckets, 4, 6);
  summary.min_count = counts.front();
  summary.max_count = counts.back();
  const std::size_t mid = counts.size() / 2;
  summary.median_count = counts.size() % 2 == 1
                             ? static_cast<double>(counts[mid])
                             : (static_cast<double>(counts[mid - 1]) + static_cast<double>(counts[mid])) / 2.0;
  double sum = 0.0;
  for (std::size_t c : counts) sum += static_cast<double>(c);
  summary.mean_count = sum / static_cast<double>(counts.size());
  return summary;
}

double fraction_in_range(std::span<const BucketResult> buckets, std::size_t lo, std::size_t hi) {
  if (lo > hi) throw ConfigError("fraction_in_range requires lo <= hi");
  std::size_t nonempty = 0;
  std::size_t inside = 0;
  for (const BucketResult& bucket : buckets) {
    if (bucket.keyword_count == 0) continue;
    ++nonempty;
    if (bucket.community_count >= lo && bucket.community_count <= hi) ++inside;
  }
  if (nonempty == 0) throw Error("no data");
  return static_cast<double>(inside) / static_cast<double>(nonempty);
}

double fraction_in_range(const RunReport& report, std::size_t lo, std::size_t hi) {
  return fraction_in_range(report.buckets, lo, hi);
}

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
ordered_json optional_value(const std::optional<T>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json histogram_json(const std::map<std::size_t, std::size_t>& histogram) {
  ordered_json object = ordered_json::object();
  for (const auto& [count, frequency] : histogram) object[std::to_string(count)] = frequency;
  return object;
}

std::map<std::size_t, std::size_t> histogram_from(const nlohmann::json& object) {
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& [key, value] : object.items()) {
    histogram[std::stoull(key)] = value.get<std::size_t>();
  }
  return histogram;
}

ordered_json summary_json(const ReportSummary& summary) {
  ordered_json out;
  out["bucket_count"] = summary.bucket_count;
  out["nonempty_bucket_count"] = summary.nonempty_bucket_count;
  out["distribution"] = histogram_json(summary.distribution);
  out["fraction_4_to_6"] = optional_value(summary.fraction_4_to_6);
  out["min_count"] = optional_value(summary.min_count);
  out["max_count"] = optional_value(summary.max_count);
  out["median_count"] = optional_value(summary.median_count);
  out["mean_count"] = optional_value(summary.mean_count);
  return out;
}

template <typename T>
std::optional<T> optional_from(const nlohmann::json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<T>();
}

}  // namespace

nlohmann::ordered_json to_json(const RunReport& report) {
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  out["label"] = report.label;
  out["period"] = std::string(to_string(report.period));
  ordered_json& config = out["config"];
  config["top_k"] = report.top_k;
  config["runs"] = report.runs;
  config["master_seed"] = report.master_seed;
  config["filter"]["drop_retweets"] = report.filter.drop_retweets;
  config["filter"]["english_only"] = report.filter.english_only;
  config["filter"]["stopword_ratio_threshold"] = report.filter.stopword_ratio_threshold;
  config["stopwords"] = report.stopword_source;
  out["input"]["tweets"] = report.input_tweets;
  out["input"]["kept"] = report.kept_tweets;

  ordered_json buckets = ordered_json::array();
  for (const BucketResult& b : report.buckets) {
    ordered_json item;
    item["bucket"] = b.bucket.label();
    item["tweet_count"] = b.tweet_count;
    item["keyword_count"] = b.keyword_count;
    item["community_count"] = b.community_count;
    item["modularity"] = optional_value(b.modularity);
    item["total_weight"] = b.total_weight;
    item["isolated_count"] = b.isolated_count;
    item["component_count"] = b.component_count;
    item["small_component_count"] = b.small_component_count;
    item["histogram"] = histogram_json(b.histogram);
    item["flags"] = b.flags;
    buckets.push_back(std::move(item));
  }
  out["buckets"] = std::move(buckets);
  out["summary"] = summary_json(report.summary);
  return out;
}

RunReport report_from_json(const nlohmann::json& json) {
  try {
    if (json.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw ConfigError("unsupported report schema_version");
    }
    RunReport report;
    report.label = json.at("label").get<std::string>();
    const auto period = parse_period_kind(json.at("period").get<std::string>());
    if (!period) throw ConfigError("unknown period kind in report");
    report.period = *period;
    const auto& config = json.at("config");
    report.top_k = config.at("top_k").get<std::size_t>();
    report.runs = config.at("runs").get<std::size_t>();
    report.master_seed = config.at("master_seed").get<std::uint64_t>();
    report.filter.drop_retweets = config.at("filter").at("drop_retweets").get<bool>();
    report.filter.english_only = config.at("filter").at("english_only").get<bool>();
    report.filter.stopword_ratio_threshold =
        config.at("filter").at("stopword_ratio_threshold").get<double>();
    report.stopword_source = config.at("stopwords").get<std::string>();
    report.input_tweets = json.at("input").at("tweets").get<std::size_t>();
    report.kept_tweets = json.at("input").at("kept").get<std::size_t>();
    for (const auto& item : json.at("buckets")) {
      BucketResult b;
      b.bucket = BucketKey::parse(report.period, item.at("bucket").get<std::string>());
      b.tweet_count = item.at("tweet_count").get<std::size_t>();
      b.keyword_count = item.at("keyword_count").get<std::size_t>();
      b.community_count = item.at("community_count").get<std::size_t>();
      b.modularity = optional_from<double>(item.at("modularity"));
      b.total_weight = item.at("total_weight").get<std::int64_t>();
      b.isolated_count = item.at("isolated_count").get<std::size_t>();
      b.component_count = item.at("component_count").get<std::size_t>();
      b.small_component_count = item.at("small_component_count").get<std::size_t>();
      b.histogram = histogram_from(item.at("histogram"));
      b.flags = item.at("flags").get<std::vector<std::string>>();
      report.buckets.push_back(std::move(b));
    }
    report.summary = summarize(report.buckets);
    if (nlohmann::json::parse(summary_json(report.summary).dump()) != json.at("summary")) {
      throw ConfigError("report summary does not match its buckets");
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace kwnet
