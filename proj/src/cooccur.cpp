#include "kwnet/cooccur.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "kwnet/error.hpp"

namespace kwnet {

KeywordGraph::KeywordGraph(std::vector<std::string> keywords, std::vector<std::int64_t> weights,
                           std::vector<std::int64_t> frequencies, std::optional<BucketKey> bucket)
    : keywords_(std::move(keywords)),
      frequencies_(std::move(frequencies)),
      weights_(std::move(weights)),
      bucket_(std::move(bucket)) {
  const std::size_t n = keywords_.size();
  if (weights_.size() != n * n) throw ConfigError("weight matrix does not match vertex count");
  if (frequencies_.empty()) frequencies_.assign(n, 0);
  if (frequencies_.size() != n) throw ConfigError("frequency vector does not match vertex count");
  {
    std::vector<std::string_view> sorted(keywords_.begin(), keywords_.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("duplicate keyword in graph");
    }
  }
  strengths_.assign(n, 0);
  std::int64_t twice_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weight(i, i) != 0) throw ConfigError("weight matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t w = weight(i, j);
      if (w < 0) throw ConfigError("negative edge weight");
      if (w != weight(j, i)) throw ConfigError("weight matrix is not symmetric");
      strengths_[i] += w;
    }
    twice_total += strengths_[i];
  }
  total_weight_ = twice_total / 2;
}

KeywordGraph KeywordGraph::from_matrix(std::size_t n, std::vector<std::int64_t> weights) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "v" + std::to_string(i);
  return KeywordGraph(std::move(names), std::move(weights));
}

std::optional<std::size_t> KeywordGraph::index_of(std::string_view keyword) const {
  const auto it = std::find(keywords_.begin(), keywords_.end(), keyword);
  if (it == keywords_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - keywords_.begin());
}

std::size_t KeywordGraph::edge_count() const noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) count += weight(i, j) > 0 ? 1 : 0;
  }
  return count;
}

KeywordGraph build_graph(const Corpus& bucket, const KeywordSet& keywords,
                         const StopWordList& stopwords, std::optional<BucketKey> key) {
  const std::size_t n = keywords.size();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> names;
  std::vector<std::int64_t> frequencies;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    index.emplace(keywords[i].word, i);
    names.push_back(keywords[i].word);
    frequencies.push_back(keywords[i].frequency);
  }

  std::vector<std::int64_t> weights(n * n, 0);
  std::vector<std::size_t> present;
  for (const Tweet& tweet : bucket) {
    present.clear();
    for (const std::string& word : extract_keywords(tweet.text, stopwords)) {
      if (auto it = index.find(word); it != index.end()) present.push_back(it->second);
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        ++weights[present[a] * n + present[b]];
        ++weights[present[b] * n + present[a]];
      }
    }
  }
  return KeywordGraph(std::move(names), std::move(weights), std::move(frequencies), std::move(key));
}

std::vector<std::string> isolated_vertices(const KeywordGraph& graph) {
  std::vector<std::string> isolated;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (graph.strength(i) == 0) isolated.push_back(graph.keyword(i));
  }
  return isolated;
}

std::vector<std::size_t> connected_components(const KeywordGraph& graph) {
  const std::size_t n = graph.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> component(n, kUnset);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (component[root] != kUnset) continue;
    component[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        if (graph.weight(v, u) > 0 && component[u] == kUnset) {
          component[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return component;
}

ComponentSummary summarize_components(const KeywordGraph& graph) {
  ComponentSummary summary;
  const std::vector<std::size_t> component = connected_components(graph);
  if (component.empty()) return summary;
  summary.component_count = *std::max_element(component.begin(), component.end()) + 1;
  std::vector<std::size_t> sizes(summary.component_count, 0);
  for (std::size_t c : component) ++sizes[c];
  for (std::size_t size : sizes) {
    if (size == 1) ++summary.isolated_count;
    if (size >= 2 && size <= ComponentSummary::kSmallComponentSize) ++summary.small_component_count;
    summary.largest_component = std::max(summary.largest_component, size);
  }
  return summary;
}

}  // namespace kwnet
