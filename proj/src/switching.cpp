#include "artlang/switching.hpp"

#include <stdexcept>

namespace artlang {

SwitchVector SwitchVector::from_name(std::string_view name) {
  SwitchVector v;
  v.bits.reserve(name.size());
  for (char c : name) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("switch vector name must be 0/1 digits, got '" +
                                  std::string(name) + "'");
    v.bits.push_back(c == '1' ? 1 : 0);
  }
  v.name = std::string(name);
  return v;
}

SwitchVector SwitchVector::from_bits(std::vector<uint8_t> bits) {
  SwitchVector v;
  v.name.reserve(bits.size());
  for (uint8_t b : bits) v.name += b ? '1' : '0';
  v.bits = std::move(bits);
  return v;
}

std::vector<SwitchVector> enumerate_switch_vectors(int K) {
  if (K < 0 || K > 20)
    throw std::invalid_argument("switch count must be in [0, 20], got " +
                                std::to_string(K));
  std::vector<SwitchVector> out;
  out.reserve(size_t{1} << K);
  for (uint64_t i = 0; i < (uint64_t{1} << K); ++i) {
    std::vector<uint8_t> bits(static_cast<size_t>(K));
    // Name order is lexicographic, so bit 0 (the name's first character)
    // takes the most significant position of the counter.
    for (int k = 0; k < K; ++k) bits[k] = (i >> (K - 1 - k)) & 1;
    out.push_back(SwitchVector::from_bits(std::move(bits)));
  }
  return out;
}

std::string_view word_order_name(WordOrder w) {
  switch (w) {
    case WordOrder::SOV: return "SOV";
    case WordOrder::SVO: return "SVO";
    case WordOrder::OVS: return "OVS";
    case WordOrder::VOS: return "VOS";
  }
  return "?";
}

WordOrder word_order_of(const SwitchVector& b) {
  if (b.size() < 2)
    throw std::invalid_argument(
        "word order needs the S and VP switches (bits 0 and 1)");
  // S off keeps the subject before the VP; VP off keeps the object before
  // the verb.
  if (!b.bit(0)) return b.bit(1) ? WordOrder::SVO : WordOrder::SOV;
  return b.bit(1) ? WordOrder::VOS : WordOrder::OVS;
}

}  // namespace artlang
