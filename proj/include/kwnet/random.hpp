#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace kwnet {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `index` under `master`: mix64(mix64(master) ^ mix64(index + 1)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Deterministic 64-bit generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; range reduction and shuffling are done
/// here rather than with <random> distributions, whose algorithms are
/// implementation-defined, so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kwnet
