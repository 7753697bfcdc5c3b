#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kwnet/corpus.hpp"
#include "kwnet/lexicon.hpp"

namespace kwnet {

/// Weighted undirected keyword graph stored as a dense symmetric matrix with a
/// zero diagonal. Vertex i is the i-th keyword of the set it was built from.
class KeywordGraph {
 public:
  KeywordGraph() = default;

  /// `weights` is row-major, keywords.size() squared. Throws ConfigError unless
  /// it is symmetric, nonnegative and has a zero diagonal, or if keywords repeat.
  /// `frequencies` may be empty (treated as zeros).
  KeywordGraph(std::vector<std::string> keywords, std::vector<std::int64_t> weights,
               std::vector<std::int64_t> frequencies = {},
               std::optional<BucketKey> bucket = std::nullopt);

  /// Graph on keywords "v0".."v{n-1}" from a row-major matrix. Test and tooling helper.
  static KeywordGraph from_matrix(std::size_t n, std::vector<std::int64_t> weights);

  std::size_t size() const noexcept { return keywords_.size(); }
  bool empty() const noexcept { return keywords_.empty(); }

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  const std::string& keyword(std::size_t i) const { return keywords_[i]; }
  std::optional<std::size_t> index_of(std::string_view keyword) const;
  std::int64_t frequency(std::size_t i) const { return frequencies_[i]; }

  std::int64_t weight(std::size_t i, std::size_t j) const { return weights_[i * size() + j]; }
  /// k_i, the summed weight of edges incident to i.
  std::int64_t strength(std::size_t i) const { return strengths_[i]; }
  /// m, half the sum of all matrix entries.
  std::int64_t total_weight() const noexcept { return total_weight_; }
  std::size_t edge_count() const noexcept;

  const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
  const std::optional<BucketKey>& bucket() const noexcept { return bucket_; }

  friend bool operator==(const KeywordGraph&, const KeywordGraph&) = default;

 private:
  std::vector<std::string> keywords_;
  std::vector<std::int64_t> frequencies_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> strengths_;
  std::int64_t total_weight_ = 0;
  std::optional<BucketKey> bucket_;
};

/// Each tweet adds 1 to A_ij for every unordered pair of distinct keywords from
/// `keywords` that it contains. Repeats inside a tweet do not stack. Keywords
/// that never co-occur stay in the graph as isolated vertices.
KeywordGraph build_graph(const Corpus& bucket, const KeywordSet& keywords,
                         const StopWordList& stopwords,
                         std::optional<BucketKey> key = std::nullopt);

/// Keywords with zero strength, in vertex order.
std::vector<std::string> isolated_vertices(const KeywordGraph& graph);

/// Connected-component label per vertex, numbered by first vertex.
std::vector<std::size_t> connected_components(const KeywordGraph& graph);

struct ComponentSummary {
  std::size_t component_count = 0;        // including isolated vertices
  std::size_t isolated_count = 0;
  std::size_t small_component_count = 0;  // components of 2..kSmallComponentSize vertices
  std::size_t largest_component = 0;

  static constexpr std::size_t kSmallComponentSize = 3;
};

ComponentSummary summarize_components(const KeywordGraph& graph);

}  // namespace kwnet
