#pragma once

#include <cstdint>
#include <vector>

namespace qap {

// Counter-based generator: every draw is mix64(key, counter), so a stream is
// identified by its key alone and generation order never depends on platform
// or call history. Substreams derive a child key from (key, index); the
// instance generator takes one substream per stage and one per segment.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kKeySalt)) {}

  Rng substream(std::uint64_t index) const {
    Rng child(0);
    child.key_ = mix(key_ ^ (kStreamSalt + index * kGolden));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Integer-uniform, inclusive on both ends.
  long long uniform_int(long long a, long long b) {
    const auto span = static_cast<unsigned __int128>(b - a + 1);
    const auto r = static_cast<unsigned __int128>(next_u64());
    return a + static_cast<long long>((r * span) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(0, static_cast<long long>(i) - 1))]);
    }
  }

  // k distinct values from {0,...,n-1}, in random order.
  std::vector<int> sample(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    shuffle(pool);
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kKeySalt = 0x4F1BBCDCBFA53E0AULL;
  static constexpr std::uint64_t kStreamSalt = 0xD6E8FEB86659FD93ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qap
