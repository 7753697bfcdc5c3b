#include "kwnet/community.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

#include "kwnet/error.hpp"
#include "kwnet/random.hpp"

namespace kwnet {
namespace {

using Wide = __int128;

// Relabels in order of first appearance; returns the number of labels.
std::size_t renumber(std::vector<std::size_t>& labels) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::size_t max_label = 0;
  for (std::size_t l : labels) max_label = std::max(max_label, l);
  std::vector<std::size_t> mapping(labels.empty() ? 0 : max_label + 1, kUnset);
  std::size_t next = 0;
  for (std::size_t& l : labels) {
    if (mapping[l] == kUnset) mapping[l] = next++;
    l = mapping[l];
  }
  return next;
}

// One level of the Louvain hierarchy. Self-loop weight self[v] is A_vv, i.e.
// the summed weight of ordered pairs collapsed into v, and counts toward k_v.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;  // u != v
  std::vector<double> self;
  std::vector<double> strength;
  double two_m = 0.0;

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph level_from(const KeywordGraph& graph) {
  const std::size_t n = graph.size();
  LevelGraph level;
  level.adjacency.resize(n);
  level.self.assign(n, 0.0);
  level.strength.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (const std::int64_t w = graph.weight(v, u); w > 0) {
        level.adjacency[v].emplace_back(u, static_cast<double>(w));
      }
    }
    level.strength[v] = static_cast<double>(graph.strength(v));
  }
  level.two_m = 2.0 * static_cast<double>(graph.total_weight());
  return level;
}

LevelGraph aggregate(const LevelGraph& graph, const std::vector<std::size_t>& community,
                     std::size_t count) {
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < graph.size(); ++v) members[community[v]].push_back(v);

  LevelGraph next;
  next.adjacency.resize(count);
  next.self.assign(count, 0.0);
  next.strength.assign(count, 0.0);
  next.two_m = graph.two_m;
  std::vector<double> row(count, 0.0);
  std::vector<std::size_t> touched;
  for (std::size_t c = 0; c < count; ++c) {
    touched.clear();
    for (std::size_t v : members[c]) {
      next.self[c] += graph.self[v];
      next.strength[c] += graph.strength[v];
      for (const auto& [u, w] : graph.adjacency[v]) {
        const std::size_t d = community[u];
        if (d == c) {
          next.self[c] += w;
        } else {
          if (row[d] == 0.0) touched.push_back(d);
          row[d] += w;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t d : touched) {
      next.adjacency[c].emplace_back(d, row[d]);
      row[d] = 0.0;
    }
  }
  return next;
}

// Local-moving phase. `community` holds labels in [0, n). Returns the number
// of moves made.
//
// For a vertex v of strength k removed from its community, joining community
// c changes Q by (2m * w_c - tot_c * k) / (2 m^2), where w_c is v's weight into
// c and tot_c the strength of c without v. Gains are compared through the
// numerator, which is exact for integer weights.
std::size_t local_move(const LevelGraph& graph, std::vector<std::size_t>& community, Rng& rng,
                       const LouvainConfig& config) {
  const std::size_t n = graph.size();
  const double two_m = graph.two_m;
  const double threshold = config.min_gain * two_m * two_m / 2.0;

  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    total[community[v]] += graph.strength[v];
    ++members[community[v]];
  }
  std::vector<std::size_t> free_labels;
  for (std::size_t c = n; c-- > 0;) {
    if (members[c] == 0) free_labels.push_back(c);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> neighbours;
  constexpr std::size_t kFresh = static_cast<std::size_t>(-1);

  std::size_t total_moves = 0;
  for (std::size_t sweep = 0; sweep < config.max_sweeps_per_level; ++sweep) {
    std::size_t moves = 0;
    for (std::size_t v : order) {
      const double k = graph.strength[v];
      if (k == 0.0) continue;
      const std::size_t own = community[v];

      neighbours.clear();
      for (const auto& [u, w] : graph.adjacency[v]) {
        const std::size_t c = community[u];
        if (!seen[c]) {
          seen[c] = 1;
          neighbours.push_back(c);
        }
        link[c] += w;
      }

      total[own] -= k;
      --members[own];
      const double stay_gain = two_m * link[own] - total[own] * k;
      std::size_t best = own;
      double best_gain = stay_gain;
      for (std::size_t c : neighbours) {
        if (c == own) continue;
        const double gain = two_m * link[c] - total[c] * k;
        if (gain > best_gain) {
          best = c;
          best_gain = gain;
        }
      }
      if (members[own] > 0 && 0.0 > best_gain) {
        best = kFresh;
        best_gain = 0.0;
      }

      if (best != own && best_gain - stay_gain > threshold) {
        if (best == kFresh) {
          best = free_labels.back();
          free_labels.pop_back();
        }
        if (members[own] == 0) free_labels.push_back(own);
        community[v] = best;
        ++moves;
      } else {
        best = own;
      }
      total[best] += k;
      ++members[best];

      for (std::size_t c : neighbours) {
        seen[c] = 0;
        link[c] = 0.0;
      }
    }
    total_moves += moves;
    if (moves == 0) break;
  }
  return total_moves;
}

}  // namespace

Partition::Partition(std::span<const std::size_t> labels) : labels_(labels.begin(), labels.end()) {
  community_count_ = renumber(labels_);
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return Partition(labels);
}

Partition Partition::all_in_one(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

std::vector<std::vector<std::size_t>> Partition::communities() const {
  std::vector<std::vector<std::size_t>> groups(community_count_);
  for (std::size_t v = 0; v < labels_.size(); ++v) groups[labels_[v]].push_back(v);
  return groups;
}

double modularity(const KeywordGraph& graph, const Partition& partition) {
  if (partition.size() != graph.size()) {
    throw GraphError("partition covers " + std::to_string(partition.size()) +
                     " vertices, graph has " + std::to_string(graph.size()));
  }
  if (graph.total_weight() == 0) throw GraphError("empty graph: modularity undefined");

  // Q = sum_c (2m * in_c - tot_c^2) / (2m)^2, in_c summing A_ij over ordered
  // pairs inside c. Exact integer numerator, one rounding at the end.
  const std::size_t n = graph.size();
  const std::size_t count = partition.community_count();
  std::vector<Wide> inside(count, 0);
  std::vector<Wide> total(count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = partition.label(i);
    total[c] += graph.strength(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (partition.label(j) == c) inside[c] += graph.weight(i, j);
    }
  }
  const Wide two_m = 2 * static_cast<Wide>(graph.total_weight());
  Wide numerator = 0;
  for (std::size_t c = 0; c < count; ++c) numerator += two_m * inside[c] - total[c] * total[c];
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(two_m * two_m));
}

Partition louvain(const KeywordGraph& graph, const LouvainConfig& config) {
  const std::size_t n = graph.size();
  if (n == 0) throw GraphError("louvain requires a graph with at least one vertex");
  if (config.max_sweeps_per_level == 0) throw ConfigError("max_sweeps_per_level must be positive");
  if (!(config.min_gain >= 0.0)) throw ConfigError("min_gain must be nonnegative");
  if (graph.total_weight() == 0) return Partition::singletons(n);

  Rng rng(config.seed);
  const LevelGraph base = level_from(graph);
  std::vector<std::size_t> membership(n);
  std::iota(membership.begin(), membership.end(), std::size_t{0});

  // Each pass refines on the original vertices, then climbs the hierarchy.
  // Every move strictly raises Q, so the loop ends; the cap is a backstop.
  constexpr std::size_t kMaxPasses = 1000;
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    const std::size_t base_moves = local_move(base, membership, rng, config);
    if (pass > 0 && base_moves == 0) break;
    std::size_t count = renumber(membership);
    if (count == n && base_moves == 0) break;

    LevelGraph level = aggregate(base, membership, count);
    for (;;) {
      std::vector<std::size_t> merged(level.size());
      std::iota(merged.begin(), merged.end(), std::size_t{0});
      if (local_move(level, merged, rng, config) == 0) break;
      const std::size_t merged_count = renumber(merged);
      if (merged_count == level.size()) break;
      for (std::size_t& label : membership) label = merged[label];
      level = aggregate(level, merged, merged_count);
      count = merged_count;
    }
  }
  return Partition(membership);
}

BruteForceResult brute_force_best(const KeywordGraph& graph) {
  const std::size_t n = graph.size();
  if (n > kBruteForceMaxVertices) {
    throw ConfigError("brute-force search refuses graphs above " +
                      std::to_string(kBruteForceMaxVertices) + " vertices");
  }
  if (graph.total_weight() == 0) throw GraphError("empty graph: modularity undefined");

  const Wide two_m = 2 * static_cast<Wide>(graph.total_weight());
  // Restricted growth strings in lexicographic order: a[0] = 0 and
  // a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::size_t> labels(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max of labels[0..i]
  std::vector<Wide> inside(n);
  std::vector<Wide> total(n);

  std::vector<std::size_t> best_labels;
  Wide best_score = 0;
  std::size_t best_count = 0;
  for (;;) {
    const std::size_t count = prefix_max[n - 1] + 1;
    std::fill(inside.begin(), inside.begin() + static_cast<std::ptrdiff_t>(count), 0);
    std::fill(total.begin(), total.begin() + static_cast<std::ptrdiff_t>(count), 0);
    for (std::size_t i = 0; i < n; ++i) {
      total[labels[i]] += graph.strength(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        if (labels[i] == labels[j]) inside[labels[i]] += 2 * graph.weight(i, j);
      }
    }
    Wide score = 0;
    for (std::size_t c = 0; c < count; ++c) score += two_m * inside[c] - total[c] * total[c];
    if (best_labels.empty() || score > best_score || (score == best_score && count < best_count)) {
      best_labels = labels;
      best_score = score;
      best_count = count;
    }

    std::size_t i = n;
    while (--i > 0 && labels[i] > prefix_max[i - 1]) {
    }
    if (i == 0) break;
    ++labels[i];
    prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      labels[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  const double q = static_cast<double>(static_cast<long double>(best_score) /
                                       static_cast<long double>(two_m * two_m));
  return {Partition(best_labels), q};
}

std::size_t select_modal_count(std::span<const RunOutcome> outcomes) {
  if (outcomes.empty()) throw ConfigError("no runs to summarize");
  struct Tally {
    std::size_t runs = 0;
    std::optional<double> best;
  };
  std::map<std::size_t, Tally> tallies;
  for (const RunOutcome& outcome : outcomes) {
    Tally& tally = tallies[outcome.community_count];
    ++tally.runs;
    if (outcome.modularity && (!tally.best || *outcome.modularity > *tally.best)) {
      tally.best = outcome.modularity;
    }
  }
  // Map order is ascending count, so strict comparisons keep the smaller count.
  auto chosen = tallies.begin();
  for (auto it = std::next(tallies.begin()); it != tallies.end(); ++it) {
    const Tally& a = it->second;
    const Tally& b = chosen->second;
    if (a.runs != b.runs) {
      if (a.runs > b.runs) chosen = it;
      continue;
    }
    if (a.best && (!b.best || *a.best > *b.best)) chosen = it;
  }
  return chosen->first;
}

StabilizedResult stabilized_count(const KeywordGraph& graph, std::size_t runs,
                                  std::uint64_t master_seed, Execution execution,
                                  const LouvainConfig& base) {
  if (graph.empty()) throw GraphError("stabilized_count requires a nonempty graph");
  if (runs == 0) throw ConfigError("runs must be positive");

  std::vector<Partition> partitions(runs);
  std::vector<RunOutcome> outcomes(runs);
  const bool has_edges = graph.total_weight() > 0;
  const auto run_one = [&](std::size_t r) {
    LouvainConfig config = base;
    config.seed = derive_seed(master_seed, r);
    partitions[r] = louvain(graph, config);
    outcomes[r].community_count = partitions[r].community_count();
    if (has_edges) outcomes[r].modularity = modularity(graph, partitions[r]);
  };

  const std::size_t workers =
      execution == Execution::serial
          ? 1
          : std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, runs);
  if (workers == 1) {
    for (std::size_t r = 0; r < runs; ++r) run_one(r);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < runs; r += workers) run_one(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  StabilizedResult result;
  result.modal_count = select_modal_count(outcomes);
  for (const RunOutcome& outcome : outcomes) ++result.count_histogram[outcome.community_count];
  std::optional<std::size_t> representative;
  for (std::size_t r = 0; r < runs; ++r) {
    if (outcomes[r].community_count != result.modal_count) continue;
    if (!representative ||
        (outcomes[r].modularity && *outcomes[r].modularity > *outcomes[*representative].modularity)) {
      representative = r;
    }
  }
  result.representative_run = *representative;
  result.representative = partitions[*representative];
  result.representative_modularity = outcomes[*representative].modularity;
  return result;
}

}  // namespace kwnet
