#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace covgame {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trial `index` under `master`: mix64(master ^ mix64(index)).
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index));
}

// std distributions are implementation-defined; these draws are pinned so a
// seed replays identically on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool bernoulli(double p) { return unit() < p; }

  /// Uniform in [0, bound), rejection-sampled.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= limit) return r % bound;
    }
  }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t k = items.size(); k > 1; --k) {
      const auto j = static_cast<std::size_t>(below(k));
      std::swap(items[k - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace covgame
