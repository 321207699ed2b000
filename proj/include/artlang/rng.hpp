#ifndef ARTLANG_RNG_HPP
#define ARTLANG_RNG_HPP

#include <cstdint>

namespace artlang {

// SplitMix64 (Steele/Lea/Flood 2014). Used instead of <random> engines plus
// distributions because the standard distributions are implementation-defined
// and corpora must be bit-identical across platforms and toolchains.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  uint64_t next_below(uint64_t bound) {
    const uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      uint64_t x = next_u64();
      if (x < limit) return x % bound;
    }
  }

  // Substream rule: work item i (e.g. sentence index i of a corpus) draws
  // from substream(seed, i). Streams for distinct indices are decorrelated
  // scrambles of (seed, index), so results do not depend on the order in
  // which indices are processed.
  static SplitMix64 substream(uint64_t seed, uint64_t index) {
    SplitMix64 mixer(seed ^ (0xA0761D6478BD642Full * (index + 1)));
    return SplitMix64(mixer.next_u64());
  }

 private:
  uint64_t state_;
};

}  // namespace artlang

#endif  // ARTLANG_RNG_HPP
