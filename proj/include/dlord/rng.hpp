#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dlord {

/// Counting wrapper around mt19937_64.
///
/// Every helper is built from raw engine draws with explicit arithmetic, so a
/// stream is fully described by (seed, draw_count) and can be restored
/// bit-exactly on any platform. std::*_distribution is avoided on purpose:
/// its output is implementation-defined and it hides internal state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two draws.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draw_count() const { return draws_; }

  /// Rebuild the stream position recorded by (seed, draw_count).
  void restore(std::uint64_t seed, std::uint64_t draw_count);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t draws_ = 0;
};

/// In-place Fisher-Yates shuffle driven by the given stream.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = rng.index(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace dlord
