#include "artlang/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "artlang/manifest.hpp"

namespace artlang {

namespace fs = std::filesystem;

std::string_view section_name(Section s) {
  switch (s) {
    case Section::Train: return "train";
    case Section::Dev: return "dev";
    case Section::Test: return "test";
  }
  return "?";
}

PlanShape validate_plan(const CorpusPlan& plan) {
  if (plan.sentences_total < 1) throw CorpusError("plan has zero sentences");
  if (plan.num_splits < 1) throw CorpusError("plan has zero splits");
  if (plan.sentences_total % static_cast<uint64_t>(plan.num_splits) != 0)
    throw CorpusError("sentences_total " +
                      std::to_string(plan.sentences_total) +
                      " is not divisible by " +
                      std::to_string(plan.num_splits) + " splits");
  double fsum = plan.train_fraction + plan.dev_fraction + plan.test_fraction;
  if (std::abs(fsum - 1.0) > 1e-9)
    throw CorpusError("split fractions sum to " + std::to_string(fsum) +
                      ", expected 1");
  PlanShape shape;
  shape.per_split =
      plan.sentences_total / static_cast<uint64_t>(plan.num_splits);
  auto lines = [&](double fraction, const char* which) {
    double exact = fraction * static_cast<double>(shape.per_split);
    double rounded = std::round(exact);
    if (fraction < 0.0 || std::abs(exact - rounded) > 1e-6)
      throw CorpusError(std::string(which) + " fraction " +
                        std::to_string(fraction) + " of " +
                        std::to_string(shape.per_split) +
                        " lines is not an integer");
    return static_cast<uint64_t>(rounded);
  };
  shape.train_lines = lines(plan.train_fraction, "train");
  shape.dev_lines = lines(plan.dev_fraction, "dev");
  shape.test_lines = lines(plan.test_fraction, "test");
  if (shape.train_lines + shape.dev_lines + shape.test_lines !=
      shape.per_split)
    throw CorpusError("section sizes do not add up to the split size");
  return shape;
}

ParallelCorpus::ParallelCorpus(CorpusPlan plan, int num_switches)
    : plan_(plan), shape_(validate_plan(plan)), num_switches_(num_switches) {
  for (const SwitchVector& v : enumerate_switch_vectors(num_switches))
    names_.push_back(v.name);
}

Section ParallelCorpus::section_of(uint64_t index) const {
  uint64_t pos = index / static_cast<uint64_t>(plan_.num_splits);
  if (pos < shape_.train_lines) return Section::Train;
  if (pos < shape_.train_lines + shape_.dev_lines) return Section::Dev;
  return Section::Test;
}

std::pair<uint64_t, uint64_t> ParallelCorpus::section_range(Section s) const {
  switch (s) {
    case Section::Train: return {0, shape_.train_lines};
    case Section::Dev:
      return {shape_.train_lines, shape_.train_lines + shape_.dev_lines};
    case Section::Test:
      return {shape_.train_lines + shape_.dev_lines, shape_.per_split};
  }
  return {0, 0};
}

std::vector<uint64_t> ParallelCorpus::indices_for(int split, Section s) const {
  auto [lo, hi] = section_range(s);
  std::vector<uint64_t> out;
  out.reserve(hi - lo);
  for (uint64_t pos = lo; pos < hi; ++pos)
    out.push_back(pos * static_cast<uint64_t>(plan_.num_splits) +
                  static_cast<uint64_t>(split));
  return out;
}

fs::path corpus_file_path(const fs::path& out_dir,
                          std::string_view grammar_name, int split,
                          Section s) {
  return out_dir / ("grammar-" + std::string(grammar_name)) /
         ("split-" + std::to_string(split)) /
         (std::string(section_name(s)) + ".txt");
}

namespace {

std::string to_hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ParallelCorpus generate_parallel(const Grammar& g, const CorpusPlan& plan,
                                 const fs::path& out_dir,
                                 int max_expansions) {
  std::vector<Diagnostic> diags = validate(g);
  if (!diags.empty())
    throw CorpusError("grammar is invalid: [" + diags[0].invariant + "] " +
                      diags[0].message);

  ParallelCorpus pc(plan, g.num_switches());
  std::vector<SwitchVector> vectors =
      enumerate_switch_vectors(g.num_switches());
  Sampler sampler(g, max_expansions);

  for (const std::string& name : pc.grammar_names())
    for (int split = 0; split < plan.num_splits; ++split)
      fs::create_directories(out_dir / ("grammar-" + name) /
                             ("split-" + std::to_string(split)));

  // One pass per (split, section) block with every grammar's file open at
  // once; each sentence index is sampled exactly once and re-linearized
  // per grammar, so the files stay line-aligned by construction.
  for (int split = 0; split < plan.num_splits; ++split) {
    for (Section s : kSections) {
      std::vector<std::ofstream> files;
      files.reserve(vectors.size());
      for (const SwitchVector& v : vectors) {
        fs::path p = corpus_file_path(out_dir, v.name, split, s);
        std::ofstream& f = files.emplace_back(p);
        if (!f) throw CorpusError("cannot open '" + p.string() + "'");
      }
      for (uint64_t index : pc.indices_for(split, s)) {
        Derivation tree = sampler.sample_at(plan.seed, index);
        for (size_t gi = 0; gi < vectors.size(); ++gi)
          files[gi] << join_tokens(yield_of(tree, vectors[gi], g)) << '\n';
      }
      for (size_t gi = 0; gi < files.size(); ++gi)
        if (!files[gi])
          throw CorpusError("write failure in grammar-" + vectors[gi].name);
    }
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = tool_version();
  manifest["seed"] = plan.seed;
  manifest["plan"] = {
      {"sentences_total", plan.sentences_total},
      {"num_splits", plan.num_splits},
      {"fractions",
       {plan.train_fraction, plan.dev_fraction, plan.test_fraction}},
  };
  manifest["max_expansions"] = max_expansions;
  manifest["grammar_hash"] = to_hex64(grammar_hash(g));
  manifest["switches"] = g.switches();
  manifest["grammars"] = pc.grammar_names();
  manifest["layout"] = "grammar-<name>/split-<i>/{train,dev,test}.txt";
  write_manifest(out_dir / "manifest.json", manifest);
  return pc;
}

namespace {

bool has_prefix(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

const Derivation::Node* child_with_prefix(const Derivation& t,
                                          const Derivation::Node& n,
                                          const Grammar& g,
                                          std::string_view prefix) {
  for (int32_t c : n.children)
    if (has_prefix(g.name(t.nodes[c].symbol), prefix)) return &t.nodes[c];
  return nullptr;
}

// Leaf token under a preterminal like Noun_sg or VerbPast_pl.
const std::string* leaf_token(const Derivation& t, const Derivation::Node& n,
                              const Grammar& g) {
  const Derivation::Node* cur = &n;
  while (cur->rule >= 0) {
    if (cur->children.size() != 1) return nullptr;
    cur = &t.nodes[cur->children[0]];
  }
  return &g.name(cur->symbol);
}

// Head noun of an NP: a direct Noun_/Pronoun_ child wins (this covers the
// relative-clause rule, whose head is its Noun_ child), otherwise descend
// into the nested NP_ of an adjective or PP wrapper.
const std::string* np_head_token(const Derivation& t,
                                 const Derivation::Node& np,
                                 const Grammar& g) {
  const Derivation::Node* cur = &np;
  while (cur) {
    if (const Derivation::Node* n = child_with_prefix(t, *cur, g, "Noun_"))
      return leaf_token(t, *n, g);
    if (const Derivation::Node* n =
            child_with_prefix(t, *cur, g, "Pronoun_"))
      return leaf_token(t, *n, g);
    cur = child_with_prefix(t, *cur, g, "NP_");
  }
  return nullptr;
}

// Head verb of a VP: its direct Verb* child, then down the unary chain.
const std::string* vp_head_token(const Derivation& t,
                                 const Derivation::Node& vp,
                                 const Grammar& g) {
  const Derivation::Node* v = child_with_prefix(t, vp, g, "Verb");
  return v ? leaf_token(t, *v, g) : nullptr;
}

}  // namespace

std::vector<AgreementViolation> check_agreement(
    const std::vector<Derivation>& trees, const Lexicon& lex,
    const Grammar& g) {
  std::vector<AgreementViolation> out;
  for (size_t ti = 0; ti < trees.size(); ++ti) {
    const Derivation& t = trees[ti];
    for (const Derivation::Node& n : t.nodes) {
      if (n.rule < 0) continue;
      const Derivation::Node* vp = child_with_prefix(t, n, g, "VP");
      if (!vp) continue;

      const std::string* subject = nullptr;
      if (const Derivation::Node* subj =
              child_with_prefix(t, n, g, "NPSubj")) {
        // Clause: subject phrase plus predicate.
        if (const Derivation::Node* np =
                child_with_prefix(t, *subj, g, "NP_"))
          subject = np_head_token(t, *np, g);
      } else if (const Derivation::Node* head =
                     child_with_prefix(t, n, g, "Noun_")) {
        // Relative clause: the head noun is the VP's subject.
        subject = leaf_token(t, *head, g);
      }
      if (!subject) continue;

      const std::string* verb = vp_head_token(t, *vp, g);
      if (!verb) continue;

      std::optional<TokenFeatures> fs = lex.find_features(*subject);
      std::optional<TokenFeatures> fv = lex.find_features(*verb);
      if (!fs || !fv) continue;
      if (fs->number == Number::None || fv->number == Number::None) continue;
      if (fs->number != fv->number)
        out.push_back({ti, *subject, *verb, fs->number, fv->number});
    }
  }
  return out;
}

}  // namespace artlang
