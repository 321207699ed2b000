#ifndef ARTLANG_CORPUS_HPP
#define ARTLANG_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "artlang/grammar.hpp"
#include "artlang/lexicon.hpp"
#include "artlang/sampler.hpp"
#include "artlang/switching.hpp"

namespace artlang {

struct CorpusError : std::runtime_error {
  explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CorpusPlan {
  uint64_t sentences_total = 100000;
  int num_splits = 10;
  double train_fraction = 0.8;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  uint64_t seed = 0;
};

enum class Section { Train, Dev, Test };
inline constexpr Section kSections[] = {Section::Train, Section::Dev,
                                        Section::Test};
std::string_view section_name(Section s);

// Integer geometry of a plan; validate_plan rejects plans whose totals or
// fractions do not divide evenly.
struct PlanShape {
  uint64_t per_split = 0;
  uint64_t train_lines = 0;
  uint64_t dev_lines = 0;
  uint64_t test_lines = 0;
};
PlanShape validate_plan(const CorpusPlan& plan);

// Sentence-index bookkeeping shared by every grammar: index i belongs to
// split i % num_splits, and its position i / num_splits within the split
// falls into train/dev/test by contiguous blocks (train first). The
// assignment never looks at the grammar, which is what keeps line n of any
// two grammar files the same derivation.
class ParallelCorpus {
 public:
  ParallelCorpus(CorpusPlan plan, int num_switches);

  const CorpusPlan& plan() const { return plan_; }
  const PlanShape& shape() const { return shape_; }
  const std::vector<std::string>& grammar_names() const { return names_; }
  int num_switches() const { return num_switches_; }

  int split_of(uint64_t index) const {
    return static_cast<int>(index % static_cast<uint64_t>(plan_.num_splits));
  }
  Section section_of(uint64_t index) const;

  // Position bounds [lo, hi) within a split for one section.
  std::pair<uint64_t, uint64_t> section_range(Section s) const;

  // All sentence indices of (split, section), ascending.
  std::vector<uint64_t> indices_for(int split, Section s) const;

 private:
  CorpusPlan plan_;
  PlanShape shape_;
  int num_switches_;
  std::vector<std::string> names_;
};

// out_dir/grammar-<name>/split-<i>/<section>.txt
std::filesystem::path corpus_file_path(const std::filesystem::path& out_dir,
                                       std::string_view grammar_name,
                                       int split, Section s);

// Samples plan.sentences_total derivations (all switches off) and writes
// every grammar's linearization of each, one sentence per line, under
// out_dir, plus a manifest.json recording plan, seed, grammar hash and
// tool version. Line n of any two grammar files is the same derivation.
ParallelCorpus generate_parallel(const Grammar& g, const CorpusPlan& plan,
                                 const std::filesystem::path& out_dir,
                                 int max_expansions = 512);

struct AgreementViolation {
  size_t tree_index = 0;
  std::string subject_token;
  std::string verb_token;
  Number subject_number = Number::None;
  Number verb_number = Number::None;
};

// Checks subject-verb number agreement on every clause of every tree,
// relative clauses included. Clause structure is recovered from symbol
// name conventions (NPSubj*/VP* children mark a clause, VP* + Noun* mark a
// relative clause head) and token numbers come from the lexicon, so a
// miswired grammar cannot vouch for itself. Trees whose conventions do not
// match are simply reported clause-free.
std::vector<AgreementViolation> check_agreement(
    const std::vector<Derivation>& trees, const Lexicon& lex,
    const Grammar& g);

}  // namespace artlang

#endif  // ARTLANG_CORPUS_HPP
