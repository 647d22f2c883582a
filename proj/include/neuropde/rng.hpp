#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace neuropde {

// SplitMix64 finalizer, used to spread seed material into stream keys.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Philox4x32-10 counter-based generator. Each stream is identified by a
// 64-bit key derived from (master_seed, stream_hi, stream_lo); the counter
// advances monotonically, so a stream's output depends only on its key and
// how many values have been drawn. Streams with the same key produce
// identical sequences, independent of which thread owns them.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_hi,
            std::uint64_t stream_lo) {
    const std::uint64_t key =
        mix64(master_seed ^ mix64(stream_hi ^ mix64(stream_lo)));
    key0_ = static_cast<std::uint32_t>(key);
    key1_ = static_cast<std::uint32_t>(key >> 32);
  }

  std::uint64_t next_u64() {
    if (idx_ >= 2) refill();
    return u64_[idx_++];
  }

  // Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  // Exponentially distributed sample with the given mean.
  double exponential(double mean) { return -mean * std::log(uniform_pos()); }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Normal(mean, sigma) rejected outside [lo, hi].
  double truncated_normal(double mean, double sigma, double lo, double hi) {
    if (sigma == 0.0) return mean;
    for (;;) {
      const double x = mean + sigma * normal();
      if (x >= lo && x <= hi) return x;
    }
  }

 private:
  void refill() {
    std::uint32_t x0 = ctr_[0], x1 = ctr_[1], x2 = ctr_[2], x3 = ctr_[3];
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ULL * x0;
      const std::uint64_t p1 = 0xCD9E8D57ULL * x2;
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += 0x9E3779B9U;
      k1 += 0xBB67AE85U;
    }
    u64_[0] = (static_cast<std::uint64_t>(x1) << 32) | x0;
    u64_[1] = (static_cast<std::uint64_t>(x3) << 32) | x2;
    idx_ = 0;
    if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
  }

  std::uint32_t key0_ = 0, key1_ = 0;
  std::array<std::uint32_t, 4> ctr_{0, 0, 0, 0};
  std::array<std::uint64_t, 2> u64_{};
  int idx_ = 2;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace neuropde
