#ifndef ARTLANG_SWITCHING_HPP
#define ARTLANG_SWITCHING_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace artlang {

// One of the 2^K reorderings: bits[k] = 1 reverses every rule tagged with
// switch k. The name writes bit 0 first, so names sort lexicographically
// like binary numbers with bit 0 as the most significant digit.
struct SwitchVector {
  std::vector<uint8_t> bits;
  std::string name;

  static SwitchVector from_name(std::string_view name);
  static SwitchVector from_bits(std::vector<uint8_t> bits);

  bool bit(int k) const { return bits[static_cast<size_t>(k)] != 0; }
  int size() const { return static_cast<int>(bits.size()); }
  bool operator==(const SwitchVector&) const = default;
};

// All 2^K vectors in lexicographic name order ("000...", ..., "111...").
// K ranges over [0, 20]; K=0 yields the single empty configuration.
std::vector<SwitchVector> enumerate_switch_vectors(int K);

enum class WordOrder { SOV, SVO, OVS, VOS };

std::string_view word_order_name(WordOrder w);

// Base-grammar convention: bit 0 is the S switch (subject/VP order), bit 1
// the VP switch (object/verb order). Requires K >= 2.
WordOrder word_order_of(const SwitchVector& b);

}  // namespace artlang

#endif  // ARTLANG_SWITCHING_HPP
