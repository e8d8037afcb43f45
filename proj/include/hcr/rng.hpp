#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hcr/error.hpp"

namespace hcr {

// SplitMix64 step: advances `state` by the golden-ratio increment and returns
// a mixed output. Used for seeding and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives the seed of substream `stream` under a master seed. Substreams are
// laid out on the golden-ratio stride of SplitMix64, so distinct (seed,
// stream) pairs land on decorrelated states. Parallel work items (episodes,
// synthetic items) each consume one substream, which makes every item's draw
// sequence independent of processing order.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t base = splitmix64(s);
  std::uint64_t t = base + stream * 0x9E3779B97F4A7C15ULL;
  return splitmix64(t);
}

// Deterministic, platform-independent generator: xoshiro256** seeded through
// SplitMix64, with hand-rolled distributions. Standard-library distributions
// are not bit-portable across implementations, so none are used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(substream_seed(seed, stream));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Unbiased integer in [0, bound) by masked rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("uniform_below: bound must be positive");
    if (bound == 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    while (true) {
      const std::uint64_t x = next_u64() & mask;
      if (x < bound) return x;
    }
  }

  int uniform_int(int lo, int hi) {  // inclusive range
    if (lo > hi) throw InvalidArgument("uniform_int: empty range");
    return lo + static_cast<int>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Marsaglia polar method; the second variate of
  // each accepted pair is discarded to keep the draw sequence simple.
  double normal() {
    while (true) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

  // First `count` entries of a partial Fisher-Yates pass over 0..n-1, in draw
  // order: a uniform sample without replacement.
  std::vector<int> sample_without_replacement(int n, int count) {
    if (count < 0 || count > n) {
      throw InvalidArgument("sample_without_replacement: count out of range");
    }
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < count; ++i) {
      const int j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
  }

 private:
  std::uint64_t state_[4] = {};
};

}  // namespace hcr
