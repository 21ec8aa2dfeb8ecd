#pragma once

#include <cmath>
#include <cstdint>

namespace drsm {

// Counter-based generator: the SplitMix64 output function applied to
// key + n * golden gamma. Streams are split by hashing a tag into a new key,
// so instance generators can derive independent substreams deterministically.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : key_(seed) {}

  uint64_t next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGamma);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  int next_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  CounterRng split(uint64_t tag) const {
    return CounterRng(mix64(key_ ^ mix64(tag + kGamma)));
  }

  static uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace drsm
