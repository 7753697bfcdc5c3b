// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kwnet/cli.hpp"
#include "kwnet/community.hpp"
#include "kwnet/export.hpp"
#include "kwnet/report.hpp"
#include "kwnet/synth.hpp"
#include "support/oracles.hpp"

using namespace kwnet;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = KWNET_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

KeywordGraph to_graph(const oracle::Graph& g) { return KeywordGraph::from_matrix(g.n, g.a); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus fixture_corpus() { return read_corpus_file(kFixtures / "fixture10.jsonl", InputFormat::jsonl).corpus; }

KeywordGraph fixture_graph() {
  const StopWordList& sw = StopWordList::bundled();
  const Corpus kept = filter_corpus(fixture_corpus(), FilterConfig{}, sw);
  const auto buckets = bucket_by_period(kept, PeriodKind::month);
  const auto& [key, bucket] = *buckets.begin();
  return build_graph(bucket, top_k(keyword_frequencies(bucket, sw, key), kDefaultTopK), sw, key);
}

std::vector<KeywordGraph> month_graphs(const Corpus& corpus, std::size_t k = kDefaultTopK) {
  const StopWordList& sw = StopWordList::bundled();
  std::vector<KeywordGraph> out;
  for (const auto& [key, bucket] : bucket_by_period(filter_corpus(corpus, FilterConfig{}, sw), PeriodKind::month)) {
    out.push_back(build_graph(bucket, top_k(keyword_frequencies(bucket, sw, key), k), sw, key));
  }
  return out;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// 1. Modularity identities on random graphs.
Outcome identities() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::size_t graphs = 0;
  while (graphs < 200) {
    const oracle::Graph g = oracle::random_graph(rng, 3 + rng() % 8, false);
    if (!oracle::has_edges(g)) continue;
    ++graphs;
    const KeywordGraph kg = to_graph(g);
    o.require(std::abs(modularity(kg, Partition::all_in_one(g.n))) <= 1e-12, "all-in-one Q != 0");
    for (int p = 0; p < 50; ++p) {
      std::vector<std::size_t> labels(g.n);
      for (auto& l : labels) l = rng() % g.n;
      const double q = modularity(kg, Partition(labels));
      o.require(q >= -1.0 && q <= 1.0, "Q outside [-1, 1]");
      o.require(std::abs(q - oracle::modularity(g, labels)) <= 1e-12, "Q disagrees with reference sum");
    }
  }
  return o;
}

// 2. Hand values, each cross-checked against the reference sum.
Outcome hand_values() {
  Outcome o;
  struct Case {
    oracle::Graph g;
    std::vector<std::size_t> labels;
    double expected;
  };
  const std::vector<Case> cases = {
      {{4, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}}, {0, 0, 1, 1}, 0.5},
      {{3, {0, 1, 1, 1, 0, 1, 1, 1, 0}}, {0, 1, 2}, -1.0 / 3.0},
      {{2, {0, 1, 1, 0}}, {0, 1}, -0.5},
  };
  for (const Case& c : cases) {
    const double q = modularity(to_graph(c.g), Partition(c.labels));
    o.require(std::abs(q - c.expected) <= 1e-12, fmt("got %.15f, want %.15f", q, c.expected));
    o.require(std::abs(oracle::modularity(c.g, c.labels) - c.expected) <= 1e-12, "reference sum disagrees");
  }
  return o;
}

// 3. Louvain against exhaustive search.
Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::size_t optimal = 0;
  const std::size_t graphs = 50;
  for (std::size_t t = 0; t < graphs; ++t) {
    const oracle::Graph g = oracle::random_graph(rng, 2 + rng() % 7, true, 0.4, 6);
    const double best = oracle::best_modularity(g);
    const Partition p = louvain(to_graph(g), LouvainConfig{.seed = t});
    const double q = oracle::modularity(g, p.labels());
    o.require(q <= best + 1e-9, "louvain exceeded the optimum");
    o.require(oracle::locally_optimal(g, p.labels()), "partition not locally optimal");
    optimal += std::abs(q - best) <= 1e-9 ? 1 : 0;
  }
  o.require(optimal * 100 >= graphs * 95, "optimum reached in " + std::to_string(optimal) + "/50");
  if (o.pass) o.detail = "optimum reached in " + std::to_string(optimal) + "/50";
  return o;
}

// 4. Determinism of the stabilized count.
Outcome determinism() {
  Outcome o;
  std::vector<KeywordGraph> graphs = {fixture_graph()};
  graphs.push_back(month_graphs(random_tweets(WordList::bundled(), 1, 100, 4)).at(0));
  graphs.push_back(month_graphs(topic_mixture(TopicSpec{}, 1, 500, 4).corpus).at(0));
  for (const KeywordGraph& g : graphs) {
    const StabilizedResult first = stabilized_count(g, 100, 2024, Execution::parallel);
    const StabilizedResult again = stabilized_count(g, 100, 2024, Execution::parallel);
    const StabilizedResult serial = stabilized_count(g, 100, 2024, Execution::serial);
    o.require(first == again, "repeat differs");
    o.require(first == serial, "serial differs from parallel");
    o.require(first.representative_modularity.has_value() && serial.representative_modularity.has_value() &&
                  std::memcmp(&*first.representative_modularity, &*serial.representative_modularity,
                              sizeof(double)) == 0,
              "modularity bits differ");
  }
  return o;
}

std::vector<std::size_t> counts_of(const RunReport& report) {
  std::vector<std::size_t> out;
  for (const BucketResult& b : report.buckets) out.push_back(b.community_count);
  return out;
}

double mean(const std::vector<std::size_t>& xs) {
  double sum = 0;
  for (std::size_t x : xs) sum += static_cast<double>(x);
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t x : xs) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

AnalysisConfig control_config(std::uint64_t seed) {
  AnalysisConfig config;
  config.top_k = 100;
  config.runs = 100;
  config.master_seed = seed;
  return config;
}

struct TopicRun {
  std::vector<std::size_t> counts;  // one per month, replicates concatenated
  std::size_t agree = 0;            // keywords whose community's majority topic is their own
  std::size_t keywords = 0;
  std::size_t replicates_passing = 0;

  double agreement() const { return keywords == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(keywords); }
};

std::size_t exact(const std::vector<std::size_t>& counts, std::size_t want) {
  return static_cast<std::size_t>(std::count(counts.begin(), counts.end(), want));
}

// Ten replicate 6-month corpora with fixed seeds; the month fraction is pooled
// over all of them so one unlucky draw neither passes nor fails the check.
constexpr std::size_t kReplicates = 10;

TopicRun run_topics(std::size_t topics, double month_fraction) {
  TopicSpec spec;
  spec.topic_count = topics;
  TopicRun run;
  for (std::size_t r = 0; r < kReplicates; ++r) {
    const std::uint64_t seed = 6000 + 100 * topics + r;
    const TopicCorpus tc = topic_mixture(spec, 6, 500, seed);
    const Analysis a = analyze(tc.corpus, control_config(seed));
    const auto counts = counts_of(a.report);
    run.counts.insert(run.counts.end(), counts.begin(), counts.end());
    run.replicates_passing += static_cast<double>(exact(counts, topics)) >= month_fraction * 6.0 ? 1 : 0;
    for (const BucketArtifacts& art : a.artifacts) {
      for (const auto& members : art.partition.communities()) {
        std::map<std::size_t, std::size_t> votes;
        for (std::size_t v : members) ++votes[tc.ground_truth.at(art.graph.keyword(v))];
        std::size_t majority = 0;
        std::size_t best = 0;
        for (const auto& [topic, n] : votes) {
          if (n > best) {
            best = n;
            majority = topic;
          }
        }
        for (std::size_t v : members) run.agree += tc.ground_truth.at(art.graph.keyword(v)) == majority ? 1 : 0;
        run.keywords += members.size();
      }
    }
  }
  return run;
}

double topic_mean = 0.0;

// 6. Topic recovery.
Outcome topic_recovery() {
  Outcome o;
  std::string detail;
  for (const auto& [t, need] : {std::pair{5u, 0.9}, std::pair{3u, 0.8}, std::pair{8u, 0.8}}) {
    const TopicRun run = run_topics(t, need);
    const double rate = static_cast<double>(exact(run.counts, t)) / static_cast<double>(run.counts.size());
    o.require(run.counts.size() == 6 * kReplicates, "expected 6 months per replicate");
    o.require(rate >= need, "");
    if (t == 5) {
      topic_mean = mean(run.counts);
      o.require(run.agreement() >= 0.95, "");
    }
    detail += (detail.empty() ? "" : "; ") + std::string("T=") + std::to_string(t) +
              fmt(" exact in %.3f of months (need %.2f)", rate, need) + ", " +
              std::to_string(run.replicates_passing) + "/" + std::to_string(kReplicates) + " replicates pass";
    if (t == 5) detail += fmt(", keyword agreement %.3f", run.agreement());
  }
  o.detail = detail;
  return o;
}

// 5. Random-word control.
Outcome random_control() {
  Outcome o;
  o.require(WordList::bundled().size() >= 10000, "word list too small");
  const Analysis a = analyze(random_tweets(WordList::bundled(), 6, 100, 505), control_config(505));
  const auto counts = counts_of(a.report);
  o.require(counts.size() == 6, "expected 6 months");
  for (std::size_t c : counts) o.require(c >= 30, "month with " + std::to_string(c) + " communities");
  o.require(mean(counts) > 4.0 * topic_mean,
            fmt("mean %.2f not above 4x topic mean %.2f", mean(counts), topic_mean));
  if (o.pass) o.detail = "counts [" + join(counts) + "] mean " + fmt("%.2f vs topic mean %.2f", mean(counts), topic_mean);
  return o;
}

// 7. Sparse month drawn from many tiny, almost disjoint vocabularies.
Outcome sparse_month() {
  Outcome o;
  const StopWordList& sw = StopWordList::bundled();
  std::vector<std::string> pool;
  for (const std::string& w : WordList::bundled().words()) {
    if (extract_keywords(w, sw) == std::vector<std::string>{w}) pool.push_back(w);
    if (pool.size() == 300) break;
  }
  // 100 vocabularies of three words; every tenth shares a word with the next.
  std::vector<std::vector<std::string>> vocab(100);
  for (std::size_t v = 0; v < 100; ++v) {
    vocab[v] = {pool[3 * v], pool[3 * v + 1], pool[3 * v + 2]};
    if (v % 10 == 0 && v + 1 < 100) vocab[v][2] = pool[3 * (v + 1)];
  }
  std::mt19937_64 rng(707);
  std::vector<Tweet> tweets;
  for (std::size_t i = 0; i < 35; ++i) {
    const auto& words = vocab[rng() % 100];
    const std::size_t n = 1 + rng() % 3;
    std::string text;
    for (std::size_t k = 0; k < n; ++k) text += (k ? " " : "") + words[rng() % words.size()];
    tweets.push_back(Tweet{"s" + std::to_string(i), synthetic_time(0, i, 35), text, false, "en"});
  }
  const Analysis a = analyze(Corpus(tweets), control_config(707));
  const BucketResult& b = a.report.buckets.at(0);
  o.require(b.component_count > 1, "graph is connected");
  o.require(b.community_count >= 10, "only " + std::to_string(b.community_count) + " communities");
  o.require(b.isolated_count + b.small_component_count > 0, "no isolated vertices or small components reported");
  o.require(std::find(b.flags.begin(), b.flags.end(), "disconnected") != b.flags.end(), "disconnected flag missing");
  if (o.pass) {
    o.detail = std::to_string(b.keyword_count) + " keywords, " + std::to_string(b.component_count) + " components, " +
               std::to_string(b.community_count) + " communities, " + std::to_string(b.isolated_count) +
               " isolated, " + std::to_string(b.small_component_count) + " small components";
  }
  return o;
}

// 8. Hand-computed fixture matrix and GEXF round trip.
Outcome fixture_pipeline() {
  Outcome o;
  const KeywordGraph g = fixture_graph();
  std::ostringstream matrix;
  write_adjacency_csv(matrix, g);
  o.require(matrix.str() == slurp(kFixtures / "fixture10_matrix.csv"), "matrix differs from the checked-in file");
  const Partition p = stabilized_count(g, 10, 1).representative;
  std::ostringstream gexf;
  write_gexf(gexf, g, p, "fixture");
  std::istringstream in(gexf.str());
  const GexfDocument back = read_gexf(in);
  o.require(back.graph.keywords() == g.keywords(), "GEXF keywords differ");
  o.require(back.graph.weights() == g.weights(), "GEXF weights differ");
  o.require(back.partition == p, "GEXF partition differs");
  return o;
}

std::map<std::string, std::string> analyze_into(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::string> args = {"analyze", "--input", (kFixtures / "fixture10.jsonl").string(),
                                         "--seed", "42", "--out", (dir / "report.json").string(),
                                         "--export-gexf", (dir / "gexf").string(),
                                         "--export-edges", (dir / "edges").string(),
                                         "--export-partitions", (dir / "parts").string(),
                                         "--heatmap", (dir / "heatmap.csv").string()};
  std::ostringstream out;
  std::ostringstream err;
  std::map<std::string, std::string> files;
  if (cli_main(args, out, err) != kExitOk) return files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  }
  return files;
}

// 9. End-to-end reproducibility.
Outcome reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "kwnet_acceptance";
  const auto first = analyze_into(root / "a");
  const auto second = analyze_into(root / "b");
  fs::remove_all(root);
  o.require(first.size() >= 6, "analyze produced " + std::to_string(first.size()) + " files");
  o.require(first == second, "outputs differ between runs");
  if (o.pass) o.detail = std::to_string(first.size()) + " files identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no limit
    std::function<Outcome()> check;
  };
  // Criterion 6 runs before 5 because 5 compares against its mean.
  const std::vector<Criterion> criteria = {
      {1, "modularity identities", 5, identities},
      {2, "hand values", 0, hand_values},
      {3, "louvain vs exhaustive optimum", 60, oracle_equivalence},
      {4, "stabilized count determinism", 10, determinism},
      {6, "topic recovery", 120, topic_recovery},
      {5, "random-word control", 120, random_control},
      {7, "sparse month", 10, sparse_month},
      {8, "fixture matrix and GEXF", 1, fixture_pipeline},
      {9, "end-to-end reproducibility", 0, reproducibility},
  };
  std::map<int, std::string> lines;
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail = fmt("took %.2f s, budget %.0f s", seconds, c.budget_seconds);
    }
    all = all && o.pass;
    char head[160];
    std::snprintf(head, sizeof head, "%s %d %s (%.2f s)", o.pass ? "PASS" : "FAIL", c.id, c.name, seconds);
    lines[c.id] = std::string(head) + (o.detail.empty() ? "" : ": " + o.detail);
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  return all ? 0 : 1;
}
