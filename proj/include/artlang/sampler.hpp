#ifndef ARTLANG_SAMPLER_HPP
#define ARTLANG_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "artlang/grammar.hpp"
#include "artlang/rng.hpp"
#include "artlang/switching.hpp"

namespace artlang {

struct SamplerError : std::runtime_error {
  explicit SamplerError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SampleConfig {
  uint64_t seed = 0;
  uint64_t count = 1;
  int max_expansions = 512;
  bool dedupe = false;
};

// A sampled parse recorded in all-switches-off rhs order. Nodes live in a
// flat arena; nodes[0] is the root. Leaves (terminals) have rule = -1.
struct Derivation {
  struct Node {
    SymbolId symbol = -1;
    RuleId rule = -1;
    std::vector<int32_t> children;
  };
  std::vector<Node> nodes;

  const Node& root() const { return nodes[0]; }
};

// Root-first rule/leaf trace; equal traces mean equal trees. Used as the
// dedupe key and as a cheap corpus fingerprint.
std::string derivation_key(const Derivation& t);

// Draws derivations top-down, expanding the leftmost open nonterminal and
// picking rules with probability proportional to weight. A derivation that
// needs more than max_expansions nonterminal expansions is rejected and
// redrawn from the same stream.
class Sampler {
 public:
  explicit Sampler(const Grammar& g, int max_expansions = 512);

  // One attempt; nullopt on rejection.
  std::optional<Derivation> try_sample(SplitMix64& rng) const;

  // The derivation at a sentence index: deterministic in (seed, index)
  // alone, so indices may be drawn in any order or in parallel. Throws
  // SamplerError after 1000 consecutive rejections (non-productive or
  // nearly so at this max_expansions).
  Derivation sample_at(uint64_t seed, uint64_t index) const;

  const Grammar& grammar() const { return *g_; }
  int max_expansions() const { return max_expansions_; }

 private:
  const Grammar* g_;
  int max_expansions_;
  std::vector<std::vector<RuleId>> rule_ids_;     // by lhs SymbolId
  std::vector<std::vector<double>> cumulative_;   // parallel, sums to 1
};

// cfg.count derivations, tree i drawn from the index-i substream of
// cfg.seed. With dedupe, repeated trees (by derivation_key) are redrawn;
// that makes output order-sensitive, so dedupe runs sequentially.
std::vector<Derivation> sample(const Grammar& g, const SampleConfig& cfg);

// Leaves left to right, except that children of a node whose rule is
// tagged with switch k are visited right to left when b.bit(k) is set.
// Throws SamplerError when b.size() != g.num_switches().
std::vector<std::string> yield_of(const Derivation& t, const SwitchVector& b,
                                  const Grammar& g);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace artlang

#endif  // ARTLANG_SAMPLER_HPP
