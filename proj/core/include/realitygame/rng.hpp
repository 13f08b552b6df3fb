#pragma once

#include <cstdint>

namespace rg {

// splitmix64 finalizer: bijective on 64-bit words with strong avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based draw keyed by (seed, run, toss). There is no generator state:
// any toss of any run is reproducible in O(1), and ensemble members get
// independent streams without coordination.
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t run, std::uint64_t toss) {
  return mix64(mix64(mix64(seed) + run) + toss);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t run, std::uint64_t toss) {
  return static_cast<double>(counter_bits(seed, run, toss) >> 11) * 0x1.0p-53;
}

// Sequential view over the counter; exactly one uniform per toss, so
// position() is always the number of tosses drawn since start_toss.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t run, std::uint64_t start_toss = 0)
      : seed_(seed), run_(run), toss_(start_toss) {}

  double next_uniform() { return uniform01(seed_, run_, toss_++); }
  std::uint64_t position() const { return toss_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t run() const { return run_; }

 private:
  std::uint64_t seed_;
  std::uint64_t run_;
  std::uint64_t toss_;
};

}  // namespace rg
