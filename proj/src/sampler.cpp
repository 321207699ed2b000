#include "artlang/sampler.hpp"

#include <algorithm>
#include <unordered_set>

namespace artlang {

namespace {

// Consecutive rejections tolerated before declaring the grammar
// non-productive at the configured max_expansions.
constexpr int kRejectionWindow = 1000;

}  // namespace

Sampler::Sampler(const Grammar& g, int max_expansions)
    : g_(&g), max_expansions_(max_expansions) {
  if (max_expansions < 1)
    throw SamplerError("max_expansions must be >= 1");
  size_t n = g.symbols().size();
  rule_ids_.resize(n);
  cumulative_.resize(n);
  for (SymbolId s = 0; s < static_cast<SymbolId>(n); ++s) {
    if (g.is_terminal(s)) continue;
    auto ids = g.rules_for(s);
    if (ids.empty()) continue;
    rule_ids_[s].assign(ids.begin(), ids.end());
    std::vector<double> probs = normalized_weights(g, s);
    double acc = 0.0;
    for (double p : probs) {
      acc += p;
      cumulative_[s].push_back(acc);
    }
    cumulative_[s].back() = 1.0;  // absorb rounding; next_double() < 1
  }
}

std::optional<Derivation> Sampler::try_sample(SplitMix64& rng) const {
  Derivation t;
  t.nodes.push_back({g_->start(), -1, {}});
  // Leftmost-open-first expansion; rule draws happen in that fixed order
  // so the stream of random numbers is part of the determinism contract.
  std::vector<int32_t> open = {0};
  int expansions = 0;
  while (!open.empty()) {
    int32_t idx = open.back();
    open.pop_back();
    if (++expansions > max_expansions_) return std::nullopt;

    SymbolId lhs = t.nodes[idx].symbol;
    const std::vector<double>& cum = cumulative_[lhs];
    size_t pick = 0;
    if (cum.size() > 1) {
      double u = rng.next_double();
      pick = static_cast<size_t>(
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    }
    const Rule& r = g_->rule(rule_ids_[lhs][pick]);
    t.nodes[idx].rule = r.id;

    int32_t first_child = static_cast<int32_t>(t.nodes.size());
    t.nodes[idx].children.reserve(r.rhs.size());
    for (size_t i = 0; i < r.rhs.size(); ++i) {
      t.nodes[idx].children.push_back(first_child + static_cast<int32_t>(i));
      t.nodes.push_back({r.rhs[i], -1, {}});
    }
    // Push right to left so the leftmost child is expanded first.
    for (size_t i = r.rhs.size(); i-- > 0;) {
      SymbolId s = r.rhs[i];
      if (!g_->is_terminal(s))
        open.push_back(first_child + static_cast<int32_t>(i));
    }
  }
  return t;
}

Derivation Sampler::sample_at(uint64_t seed, uint64_t index) const {
  SplitMix64 rng = SplitMix64::substream(seed, index);
  for (int failures = 0; failures < kRejectionWindow;) {
    std::optional<Derivation> t = try_sample(rng);
    if (t) return std::move(*t);
    ++failures;
  }
  throw SamplerError(
      "grammar looks non-productive: " + std::to_string(kRejectionWindow) +
      " consecutive samples exceeded max_expansions=" +
      std::to_string(max_expansions_));
}

std::vector<Derivation> sample(const Grammar& g, const SampleConfig& cfg) {
  if (cfg.count < 1) throw SamplerError("sample count must be >= 1");
  Sampler sampler(g, cfg.max_expansions);
  std::vector<Derivation> out;
  out.reserve(cfg.count);
  std::unordered_set<std::string> seen;
  for (uint64_t i = 0; i < cfg.count; ++i) {
    if (!cfg.dedupe) {
      out.push_back(sampler.sample_at(cfg.seed, i));
      continue;
    }
    // Dedupe keeps drawing from index i's substream until a new tree
    // appears; a window of consecutive duplicates/rejections aborts.
    SplitMix64 rng = SplitMix64::substream(cfg.seed, i);
    int failures = 0;
    while (true) {
      if (failures >= kRejectionWindow)
        throw SamplerError(
            "dedupe exhausted: grammar has too few distinct derivations "
            "for the requested count");
      std::optional<Derivation> t = sampler.try_sample(rng);
      if (!t) {
        ++failures;
        continue;
      }
      if (!seen.insert(derivation_key(*t)).second) {
        ++failures;
        continue;
      }
      out.push_back(std::move(*t));
      break;
    }
  }
  return out;
}

std::string derivation_key(const Derivation& t) {
  std::string key;
  key.reserve(t.nodes.size() * 3);
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const Derivation::Node& n = t.nodes[stack.back()];
    stack.pop_back();
    int32_t v = n.rule >= 0 ? n.rule : ~n.symbol;
    key += std::to_string(v);
    key += ',';
    for (size_t i = n.children.size(); i-- > 0;)
      stack.push_back(n.children[i]);
  }
  return key;
}

std::vector<std::string> yield_of(const Derivation& t, const SwitchVector& b,
                                  const Grammar& g) {
  if (b.size() != g.num_switches())
    throw SamplerError("switch vector has " + std::to_string(b.size()) +
                       " bits but the grammar declares " +
                       std::to_string(g.num_switches()) + " switches");
  std::vector<std::string> tokens;
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    const Derivation::Node& n = t.nodes[stack.back()];
    stack.pop_back();
    if (n.rule < 0) {
      tokens.push_back(g.name(n.symbol));
      continue;
    }
    const Rule& r = g.rule(n.rule);
    bool reversed = r.switch_index >= 0 && b.bit(r.switch_index);
    // LIFO stack: push in the opposite of the desired visit order.
    if (reversed) {
      for (int32_t c : n.children) stack.push_back(c);
    } else {
      for (size_t i = n.children.size(); i-- > 0;)
        stack.push_back(n.children[i]);
    }
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string line;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) line += ' ';
    line += tokens[i];
  }
  return line;
}

}  // namespace artlang
