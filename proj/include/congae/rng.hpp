#pragma once

#include <cstdint>
#include <initializer_list>

namespace congae {

/// Counter-based random stream (SplitMix64 over seed + counter). The full
/// state is (seed, counter), so streams are trivially checkpointed and forked
/// per (epoch, sample) without depending on thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; consumes two draws.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  /// Independent child stream keyed by `keys`.
  RngStream fork(std::initializer_list<std::uint64_t> keys) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

}  // namespace congae
