#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kwnet/cooccur.hpp"

namespace kwnet {

/// Assignment of vertices to communities. Labels are renumbered on
/// construction to 0..C-1 in order of first appearance, so two partitions
/// compare equal exactly when they group vertices the same way.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::span<const std::size_t> labels);
  explicit Partition(const std::vector<std::size_t>& labels)
      : Partition(std::span<const std::size_t>(labels)) {}

  static Partition singletons(std::size_t n);
  static Partition all_in_one(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t community_count() const noexcept { return community_count_; }
  std::size_t label(std::size_t vertex) const { return labels_[vertex]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  /// Members of each community, ascending.
  std::vector<std::vector<std::size_t>> communities() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t community_count_ = 0;
};

/// Newman modularity Q = (1/2m) sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j].
/// Throws GraphError if m == 0 or the partition size differs from the graph's.
double modularity(const KeywordGraph& graph, const Partition& partition);

struct LouvainConfig {
  std::uint64_t seed = 0;
  std::size_t max_sweeps_per_level = 100;
  double min_gain = 0.0;  // a move needs a modularity gain strictly above this
};

/// Two-phase Louvain optimization. Local moving visits vertices in a seeded
/// random order and moves a vertex to the neighbouring community (or a fresh
/// singleton) with the largest gain, only if that gain beats staying by more
/// than min_gain. Communities are then aggregated into weighted super-vertices
/// with self-loops and the process repeats until a level merges nothing.
/// Finally local moving is rerun on the original vertices; if that moves
/// anything the climb resumes from the refined partition. The result is
/// therefore single-vertex locally optimal.
///
/// Zero-strength vertices stay singletons. With m == 0 the all-singletons
/// partition is returned. Throws GraphError on a graph with no vertices.
Partition louvain(const KeywordGraph& graph, const LouvainConfig& config = {});

struct BruteForceResult {
  Partition partition;
  double modularity = 0.0;
};

inline constexpr std::size_t kBruteForceMaxVertices = 10;

/// Exhaustive search over every set partition. Ties go to fewer communities,
/// then to the lexicographically smallest label vector. Scores are compared in
/// exact integer arithmetic. Throws ConfigError above kBruteForceMaxVertices
/// vertices and GraphError if m == 0.
BruteForceResult brute_force_best(const KeywordGraph& graph);

struct RunOutcome {
  std::size_t community_count = 0;
  std::optional<double> modularity;
};

/// Most frequent community count. Ties go to the count whose best run has the
/// higher modularity, then to the smaller count. Throws ConfigError when empty.
std::size_t select_modal_count(std::span<const RunOutcome> outcomes);

struct StabilizedResult {
  std::size_t modal_count = 0;
  std::map<std::size_t, std::size_t> count_histogram;
  Partition representative;
  std::optional<double> representative_modularity;  // absent when m == 0
  std::size_t representative_run = 0;

  friend bool operator==(const StabilizedResult&, const StabilizedResult&) = default;
};

enum class Execution { serial, parallel };

inline constexpr std::size_t kDefaultRuns = 100;

/// Runs louvain `runs` times, run r seeded with derive_seed(master_seed, r).
/// The representative is the highest-modularity partition among runs with the
/// modal count, earliest run on ties. The result does not depend on `execution`.
StabilizedResult stabilized_count(const KeywordGraph& graph, std::size_t runs = kDefaultRuns,
                                  std::uint64_t master_seed = 0,
                                  Execution execution = Execution::parallel,
                                  const LouvainConfig& base = {});

}  // namespace kwnet
