#include "kwnet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kwnet/community.hpp"
#include "kwnet/corpus.hpp"
#include "kwnet/error.hpp"
#include "kwnet/export.hpp"
#include "kwnet/lexicon.hpp"
#include "kwnet/report.hpp"
#include "kwnet/synth.hpp"

namespace kwnet {
namespace {

namespace fs = std::filesystem;

struct CorpusOptions {
  std::string input;
  std::string format;
  std::string column_map;
};

struct AnalyzeOptions {
  CorpusOptions corpus;
  std::string period = "month";
  std::size_t top_k = kDefaultTopK;
  std::size_t runs = kDefaultRuns;
  std::uint64_t seed = 0;
  std::string stopwords;
  std::string out;
  std::string label;
  std::string export_gexf;
  std::string export_edges;
  std::string export_partitions;
  std::string heatmap;
  bool keep_retweets = false;
  bool no_lang_filter = false;
  double stopword_ratio = FilterConfig{}.stopword_ratio_threshold;
  bool serial = false;
};

struct SynthOptions {
  std::size_t months = 6;
  std::size_t per_month = 100;
  std::uint64_t seed = 0;
  std::string wordlist;
  std::string stopwords;
  std::string out;
  // markov
  CorpusOptions training;
  std::size_t order = 2;
  // topics
  TopicSpec topics;
  std::string truth;
};

struct ExportOptions {
  std::vector<std::string> reports;
  std::string heatmap;
};

struct ModularityOptions {
  std::string edges;
  std::string vertices;
  std::string partition;
  std::string gexf;
};

void add_corpus_options(CLI::App& app, CorpusOptions& options, const char* input_help) {
  app.add_option("--input", options.input, input_help)->required();
  app.add_option("--format", options.format, "Input format (default: from the file extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--column-map", options.column_map,
                 "CSV column overrides, e.g. id=tweet_id,created_at=timestamp");
}

ParseResult load_corpus(const CorpusOptions& options, std::ostream& err) {
  InputFormat format = InputFormat::jsonl;
  if (options.format == "csv" ||
      (options.format.empty() && fs::path(options.input).extension() == ".csv")) {
    format = InputFormat::csv;
  }
  const ColumnMap columns = options.column_map.empty() ? ColumnMap{} : ColumnMap::parse(options.column_map);
  ParseResult parsed = read_corpus_file(options.input, format, columns);
  for (const RejectRecord& reject : parsed.rejects) {
    err << options.input << ':' << reject.line << ": rejected (" << to_string(reject.reason)
        << "): " << reject.detail << '\n';
  }
  return parsed;
}

StopWordList load_stopwords(const std::string& path) {
  return path.empty() ? StopWordList::bundled() : StopWordList::from_file(path);
}

// Writes through a callback either to `path` or, when it is empty or "-", to `out`.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty() || path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing " + path);
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

int run_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = load_corpus(options.corpus, err);
  const StopWordList stopwords = load_stopwords(options.stopwords);

  AnalysisConfig config;
  config.label = options.label.empty() ? fs::path(options.corpus.input).stem().string() : options.label;
  config.period = *parse_period_kind(options.period);
  config.top_k = options.top_k;
  config.runs = options.runs;
  config.master_seed = options.seed;
  config.filter.drop_retweets = !options.keep_retweets;
  config.filter.english_only = !options.no_lang_filter;
  config.filter.stopword_ratio_threshold = options.stopword_ratio;
  config.execution = options.serial ? Execution::serial : Execution::parallel;

  const Analysis analysis = analyze(parsed.corpus, config, stopwords);
  emit(options.out, out, [&](std::ostream& stream) {
    stream << to_json(analysis.report).dump(2) << '\n';
  });

  const std::string stem = file_stem_for(config.label);
  for (const BucketArtifacts& artifact : analysis.artifacts) {
    if (artifact.graph.empty()) continue;
    const std::string base = stem + "_" + file_stem_for(artifact.bucket.label());
    if (!options.export_gexf.empty()) {
      export_gexf(artifact.graph, artifact.partition,
                  prepare_dir(options.export_gexf) / (base + ".gexf"),
                  config.label + " " + artifact.bucket.label());
    }
    if (!options.export_edges.empty()) {
      const fs::path dir = prepare_dir(options.export_edges);
      emit((dir / (base + "_edges.csv")).string(), out,
           [&](std::ostream& s) { write_edge_csv(s, artifact.graph); });
      emit((dir / (base + "_vertices.csv")).string(), out,
           [&](std::ostream& s) { write_vertex_csv(s, artifact.graph); });
    }
    if (!options.export_partitions.empty()) {
      emit((prepare_dir(options.export_partitions) / (base + "_partition.csv")).string(), out,
           [&](std::ostream& s) { write_partition_csv(s, artifact.graph, artifact.partition); });
    }
  }
  if (!options.heatmap.empty()) {
    export_heatmap_csv(std::span<const RunReport>(&analysis.report, 1), options.heatmap);
  }
  return kExitOk;
}

const WordList& pick_wordlist(const std::string& path, std::optional<WordList>& storage) {
  if (path.empty()) return WordList::bundled();
  storage.emplace(WordList::from_file(path));
  return *storage;
}

int run_synth_random(const SynthOptions& options, std::ostream& out) {
  std::optional<WordList> storage;
  const Corpus corpus = random_tweets(pick_wordlist(options.wordlist, storage), options.months,
                                      options.per_month, options.seed);
  emit(options.out, out, [&](std::ostream& s) { write_jsonl(s, corpus); });
  return kExitOk;
}

int run_synth_markov(const SynthOptions& options, std::ostream& out, std::ostream& err) {
  const ParseResult training = load_corpus(options.training, err);
  const MarkovModel model = markov_train(training.corpus, options.order);
  const Corpus corpus = markov_generate(model, options.months, options.per_month, options.seed);
  emit(options.out, out, [&](std::ostream& s) { write_jsonl(s, corpus); });
  return kExitOk;
}

int run_synth_topics(const SynthOptions& options, std::ostream& out) {
  std::optional<WordList> storage;
  const StopWordList stopwords = load_stopwords(options.stopwords);
  const TopicCorpus result = topic_mixture(options.topics, options.months, options.per_month,
                                           options.seed, pick_wordlist(options.wordlist, storage),
                                           stopwords);
  emit(options.out, out, [&](std::ostream& s) { write_jsonl(s, result.corpus); });
  if (!options.truth.empty()) {
    emit(options.truth, out, [&](std::ostream& s) {
      s << "keyword,topic\n";
      for (const auto& [word, topic] : result.ground_truth) s << csv_quote(word) << ',' << topic << '\n';
    });
  }
  return kExitOk;
}

int run_export(const ExportOptions& options) {
  std::vector<RunReport> reports;
  for (const std::string& path : options.reports) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report " + path);
    nlohmann::json json;
    try {
      in >> json;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("report " + path + " is not valid JSON: " + e.what());
    }
    reports.push_back(report_from_json(json));
  }
  export_heatmap_csv(reports, options.heatmap);
  return kExitOk;
}

int run_modularity(const ModularityOptions& options, std::ostream& out) {
  KeywordGraph graph;
  Partition partition;
  if (!options.gexf.empty()) {
    std::ifstream in(options.gexf, std::ios::binary);
    if (!in) throw IoError("cannot open " + options.gexf);
    GexfDocument document = read_gexf(in);
    graph = std::move(document.graph);
    partition = std::move(document.partition);
  } else {
    std::ifstream edges(options.edges, std::ios::binary);
    if (!edges) throw IoError("cannot open " + options.edges);
    std::ifstream vertices;
    if (!options.vertices.empty()) {
      vertices.open(options.vertices, std::ios::binary);
      if (!vertices) throw IoError("cannot open " + options.vertices);
    }
    graph = read_edge_csv(edges, options.vertices.empty() ? nullptr : &vertices);
    std::ifstream labels(options.partition, std::ios::binary);
    if (!labels) throw IoError("cannot open " + options.partition);
    partition = read_partition_csv(labels, graph);
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", modularity(graph, partition));
  out << buffer << '\n';
  return kExitOk;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyword co-occurrence networks and community counts for message archives", "kwnet"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_options;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Analyze a corpus and write a JSON report");
  add_corpus_options(*analyze_cmd, analyze_options.corpus, "Corpus file (JSONL or CSV)");
  analyze_cmd->add_option("--period", analyze_options.period, "Bucket size")
      ->check(CLI::IsMember({"month", "quarter"}))
      ->capture_default_str();
  analyze_cmd->add_option("--top-k", analyze_options.top_k, "Keywords per bucket")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--runs", analyze_options.runs, "Louvain runs per bucket")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--seed", analyze_options.seed, "Master seed")->capture_default_str();
  analyze_cmd->add_option("--stopwords", analyze_options.stopwords, "Stop-word list (default: bundled)");
  analyze_cmd->add_option("--out", analyze_options.out, "Report path (default: standard output)");
  analyze_cmd->add_option("--label", analyze_options.label, "Report label (default: input file stem)");
  analyze_cmd->add_option("--export-gexf", analyze_options.export_gexf, "Directory for GEXF graphs");
  analyze_cmd->add_option("--export-edges", analyze_options.export_edges,
                          "Directory for edge and vertex CSVs");
  analyze_cmd->add_option("--export-partitions", analyze_options.export_partitions,
                          "Directory for partition CSVs");
  analyze_cmd->add_option("--heatmap", analyze_options.heatmap, "Write a one-row heatmap CSV");
  analyze_cmd->add_flag("--keep-retweets", analyze_options.keep_retweets, "Do not drop retweets");
  analyze_cmd->add_flag("--no-lang-filter", analyze_options.no_lang_filter, "Keep non-English tweets");
  analyze_cmd->add_option("--stopword-ratio", analyze_options.stopword_ratio,
                          "Minimum stop-word share for untagged tweets to count as English")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  analyze_cmd->add_flag("--serial", analyze_options.serial, "Run Louvain repetitions on one thread");

  SynthOptions synth_options;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic control corpus");
  synth_cmd->require_subcommand(1);
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--months", synth_options.months)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--per-month", synth_options.per_month)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", synth_options.seed)->capture_default_str();
    cmd->add_option("--out", synth_options.out, "JSONL path (default: standard output)");
  };
  CLI::App* random_cmd = synth_cmd->add_subcommand("random", "Uniformly drawn words");
  add_common(random_cmd);
  random_cmd->add_option("--wordlist", synth_options.wordlist, "Word list (default: bundled)");

  CLI::App* markov_cmd = synth_cmd->add_subcommand("markov", "Word-level Markov chain");
  add_common(markov_cmd);
  add_corpus_options(*markov_cmd, synth_options.training, "Training corpus");
  markov_cmd->add_option("--order", synth_options.order)
      ->check(CLI::IsMember({std::size_t{1}, std::size_t{2}}))
      ->capture_default_str();

  CLI::App* topics_cmd = synth_cmd->add_subcommand("topics", "Planted topic mixture");
  add_common(topics_cmd);
  topics_cmd->add_option("--wordlist", synth_options.wordlist, "Word list (default: bundled)");
  topics_cmd->add_option("--stopwords", synth_options.stopwords, "Stop-word list (default: bundled)");
  topics_cmd->add_option("--topics", synth_options.topics.topic_count)->capture_default_str();
  topics_cmd->add_option("--vocab", synth_options.topics.vocab_per_topic)->capture_default_str();
  topics_cmd->add_option("--words-per-tweet", synth_options.topics.words_per_tweet)->capture_default_str();
  topics_cmd->add_option("--noise", synth_options.topics.cross_topic_noise)->capture_default_str();
  topics_cmd->add_option("--truth", synth_options.truth, "Write keyword,topic CSV here");

  ExportOptions export_options;
  CLI::App* export_cmd = app.add_subcommand("export", "Combine JSON reports into a heatmap CSV");
  export_cmd->add_option("--reports", export_options.reports, "Report JSON files")->required();
  export_cmd->add_option("--heatmap", export_options.heatmap, "Heatmap CSV path")->required();

  ModularityOptions modularity_options;
  CLI::App* modularity_cmd = app.add_subcommand("modularity", "Score a partition of a graph");
  CLI::Option* edges_opt = modularity_cmd->add_option("--edges", modularity_options.edges, "Edge CSV");
  CLI::Option* vertices_opt =
      modularity_cmd->add_option("--vertices", modularity_options.vertices, "Vertex CSV");
  CLI::Option* partition_opt =
      modularity_cmd->add_option("--partition", modularity_options.partition, "Partition CSV");
  CLI::Option* gexf_opt = modularity_cmd->add_option("--gexf", modularity_options.gexf, "GEXF document");
  edges_opt->needs(partition_opt)->excludes(gexf_opt);
  partition_opt->needs(edges_opt)->excludes(gexf_opt);
  vertices_opt->needs(edges_opt);
  modularity_cmd->require_option(1, 3);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (modularity_cmd->parsed() && gexf_opt->count() == 0 && edges_opt->count() == 0) {
      throw CLI::RequiredError("--edges or --gexf");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "kwnet: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (CLI::App* sub : {analyze_cmd, random_cmd, markov_cmd, topics_cmd, synth_cmd, export_cmd, modularity_cmd}) {
      if (sub->parsed()) {
        failing = sub;
        break;
      }
    }
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return run_analyze(analyze_options, out, err);
    if (random_cmd->parsed()) return run_synth_random(synth_options, out);
    if (markov_cmd->parsed()) return run_synth_markov(synth_options, out, err);
    if (topics_cmd->parsed()) return run_synth_topics(synth_options, out);
    if (export_cmd->parsed()) return run_export(export_options);
    return run_modularity(modularity_options, out);
  } catch (const std::exception& e) {
    err << "kwnet: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace kwnet
