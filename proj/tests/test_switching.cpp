#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "artlang/corpus.hpp"
#include "artlang/manifest.hpp"
#include "artlang/ngram.hpp"
#include "artlang/rng.hpp"
#include "test_util.hpp"

using namespace artlang;

TEST_CASE("switch vector enumeration covers 2^K in name order") {
  auto vs = enumerate_switch_vectors(6);
  REQUIRE(vs.size() == 64);
  CHECK(vs.front().name == "000000");
  CHECK(vs.back().name == "111111");
  std::set<std::string> names;
  for (size_t i = 0; i < vs.size(); ++i) {
    CHECK(names.insert(vs[i].name).second);
    if (i > 0) CHECK(vs[i - 1].name < vs[i].name);
    for (int k = 0; k < 6; ++k)
      CHECK((vs[i].name[static_cast<size_t>(k)] == '1') == vs[i].bit(k));
  }
  CHECK(enumerate_switch_vectors(0).size() == 1);
  CHECK(enumerate_switch_vectors(1).size() == 2);
  CHECK_THROWS(enumerate_switch_vectors(-1));
  CHECK_THROWS(enumerate_switch_vectors(21));
}

TEST_CASE("switch vector name round trip") {
  auto v = SwitchVector::from_name("011101");
  CHECK(v.size() == 6);
  CHECK_FALSE(v.bit(0));
  CHECK(v.bit(1));
  CHECK(v.bit(5));
  CHECK(SwitchVector::from_bits(v.bits) == v);
  CHECK_THROWS(SwitchVector::from_name("01210"));
  CHECK_THROWS(SwitchVector::from_name("01a"));
}

TEST_CASE("word order from the first two switches") {
  CHECK(word_order_of(SwitchVector::from_name("000000")) == WordOrder::SOV);
  CHECK(word_order_of(SwitchVector::from_name("011101")) == WordOrder::SVO);
  CHECK(word_order_of(SwitchVector::from_name("100000")) == WordOrder::OVS);
  CHECK(word_order_of(SwitchVector::from_name("110111")) == WordOrder::VOS);
  CHECK(word_order_name(WordOrder::SOV) == "SOV");
  CHECK_THROWS(word_order_of(SwitchVector::from_name("1")));

  // Each class gets exactly a quarter of the K=6 grammars.
  std::map<WordOrder, int> counts;
  for (const auto& v : enumerate_switch_vectors(6)) counts[word_order_of(v)]++;
  for (const auto& [order, n] : counts) CHECK(n == 16);
}

TEST_CASE("plan validation computes the per-split shape") {
  CorpusPlan plan;  // documented defaults
  PlanShape shape = validate_plan(plan);
  CHECK(shape.per_split == 10000);
  CHECK(shape.train_lines == 8000);
  CHECK(shape.dev_lines == 1000);
  CHECK(shape.test_lines == 1000);

  CorpusPlan bad = plan;
  bad.sentences_total = 100001;  // not divisible by splits
  CHECK_THROWS_AS(validate_plan(bad), CorpusError);
  bad = plan;
  bad.train_fraction = 0.85;  // fractions no longer sum to 1
  CHECK_THROWS_AS(validate_plan(bad), CorpusError);
  bad = plan;
  bad.sentences_total = 30;
  bad.num_splits = 10;  // 3 per split, fractions give fractional lines
  CHECK_THROWS_AS(validate_plan(bad), CorpusError);
}

TEST_CASE("index bookkeeping partitions every sentence exactly once") {
  CorpusPlan plan;
  plan.sentences_total = 200;
  plan.num_splits = 4;
  ParallelCorpus pc(plan, 2);
  CHECK(pc.grammar_names().size() == 4);
  CHECK(pc.shape().per_split == 50);
  CHECK(pc.shape().train_lines == 40);

  std::set<uint64_t> seen;
  for (int split = 0; split < plan.num_splits; ++split) {
    for (Section s : kSections) {
      auto idx = pc.indices_for(split, s);
      auto [lo, hi] = pc.section_range(s);
      CHECK(idx.size() == hi - lo);
      for (size_t i = 0; i < idx.size(); ++i) {
        if (i > 0) CHECK(idx[i - 1] < idx[i]);
        CHECK(pc.split_of(idx[i]) == split);
        CHECK(pc.section_of(idx[i]) == s);
        CHECK(seen.insert(idx[i]).second);
      }
    }
  }
  CHECK(seen.size() == plan.sentences_total);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == plan.sentences_total - 1);

  // Train positions come first within a split.
  CHECK(pc.section_of(0) == Section::Train);
  CHECK(pc.section_of(plan.sentences_total - 1) == Section::Test);
}

TEST_CASE("generate_parallel writes aligned corpora plus a manifest") {
  testutil::TempDir tmp;
  Lexicon lex = builtin_lexicon();
  Grammar g = base_grammar(lex);
  CorpusPlan plan;
  plan.sentences_total = 60;
  plan.num_splits = 2;
  plan.seed = 7;
  ParallelCorpus pc = generate_parallel(g, plan, tmp.path());

  REQUIRE(pc.grammar_names().size() == 64);
  for (const std::string& name : pc.grammar_names())
    for (int split = 0; split < 2; ++split) {
      CHECK(testutil::count_lines(
                corpus_file_path(tmp.path(), name, split, Section::Train)) ==
            24);
      CHECK(testutil::count_lines(
                corpus_file_path(tmp.path(), name, split, Section::Dev)) == 3);
      CHECK(testutil::count_lines(
                corpus_file_path(tmp.path(), name, split, Section::Test)) == 3);
    }

  auto manifest = read_manifest(tmp.path() / "manifest.json");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["plan"]["sentences_total"] == 60);
  CHECK(manifest["grammars"].size() == 64);
  CHECK(manifest["switches"].size() == 6);

  // Line-by-line parallelism for a few pairs: same multiset, same length.
  auto tokens_of = [](const std::string& line) {
    auto t = split_tokens(line);
    std::sort(t.begin(), t.end());
    return t;
  };
  auto a = testutil::read_lines(
      corpus_file_path(tmp.path(), "000000", 0, Section::Train));
  for (const std::string& other : {std::string("011101"), std::string("111111")}) {
    auto b = testutil::read_lines(
        corpus_file_path(tmp.path(), other, 0, Section::Train));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
      CHECK(tokens_of(a[i]) == tokens_of(b[i]));
  }

  // Regenerating with the same plan is byte-identical.
  testutil::TempDir tmp2;
  generate_parallel(g, plan, tmp2.path());
  auto again = testutil::read_lines(
      corpus_file_path(tmp2.path(), "000000", 0, Section::Train));
  CHECK(a == again);

  // A different seed changes the text.
  testutil::TempDir tmp3;
  CorpusPlan plan2 = plan;
  plan2.seed = 8;
  generate_parallel(g, plan2, tmp3.path());
  CHECK(a != testutil::read_lines(
                 corpus_file_path(tmp3.path(), "000000", 0, Section::Train)));
}

TEST_CASE("every grammar file is the same derivations relinearized") {
  testutil::TempDir tmp;
  Lexicon lex = builtin_lexicon();
  Grammar g = base_grammar(lex);
  CorpusPlan plan;
  plan.sentences_total = 30;
  plan.num_splits = 1;
  plan.seed = 3;
  generate_parallel(g, plan, tmp.path());

  // Recompute what each line must be straight from the sampler.
  Sampler sampler(g);
  auto vectors = enumerate_switch_vectors(6);
  ParallelCorpus pc(plan, 6);
  for (const auto& v : vectors) {
    std::vector<std::string> expected;
    for (Section s : kSections)
      for (uint64_t idx : pc.indices_for(0, s))
        expected.push_back(
            join_tokens(yield_of(sampler.sample_at(plan.seed, idx), v, g)));
    std::vector<std::string> got;
    for (Section s : kSections)
      for (const auto& line : testutil::read_lines(
               corpus_file_path(tmp.path(), v.name, 0, s)))
        got.push_back(line);
    CHECK(expected == got);
  }
}

TEST_CASE("subject-verb agreement holds in sampled trees") {
  Lexicon lex = builtin_lexicon();
  Grammar g = base_grammar(lex);
  SampleConfig cfg;
  cfg.seed = 11;
  cfg.count = 2000;
  auto trees = sample(g, cfg);
  CHECK(check_agreement(trees, lex, g).empty());
}

TEST_CASE("agreement checker catches a miswired grammar") {
  Lexicon lex = builtin_lexicon();
  std::string text = base_grammar_text(lex);
  // Force plural verb phrases under singular subjects.
  size_t at = text.find("rule S -> NPSubj_sg VP_sg");
  REQUIRE(at != std::string::npos);
  text.replace(at, std::string("rule S -> NPSubj_sg VP_sg").size(),
               "rule S -> NPSubj_sg VP_pl");
  Grammar broken = parse_grammar(text);
  SampleConfig cfg;
  cfg.seed = 11;
  cfg.count = 500;
  auto trees = sample(broken, cfg);
  auto violations = check_agreement(trees, lex, broken);
  CHECK(violations.size() > 0);
  if (!violations.empty()) {
    CHECK(violations[0].subject_number == Number::Sg);
    CHECK(violations[0].verb_number == Number::Pl);
  }
}

TEST_CASE("relative clause subjects are checked too") {
  Lexicon lex = builtin_lexicon();
  // A minimal grammar whose only clause is a relative clause with a
  // number-mismatched head noun.
  Grammar g = parse_grammar(R"(
start ROOT
switch Rel
rule ROOT -> S "." : 1
rule S -> NP_pl VP_pl : 1
rule NP_pl -> VP_sg Rel Noun_pl : 1 @Rel
rule VP_sg -> Verb_sg : 1
rule VP_pl -> Verb_pl : 1
rule Verb_sg -> "povifies" : 1
rule Verb_pl -> "povify" : 1
rule Noun_pl -> "fusbenders" : 1
rule Rel -> "rel" : 1
)");
  SampleConfig cfg;
  cfg.count = 1;
  auto trees = sample(g, cfg);
  auto violations = check_agreement(trees, lex, g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].subject_token == "fusbenders");
  CHECK(violations[0].verb_token == "povifies");
  CHECK(violations[0].subject_number == Number::Pl);
  CHECK(violations[0].verb_number == Number::Sg);
}
