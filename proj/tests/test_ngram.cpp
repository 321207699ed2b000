#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "artlang/ngram.hpp"
#include "test_util.hpp"

using namespace artlang;

namespace {

using Sentences = std::vector<std::vector<std::string>>;

const Sentences kSmall = {{"a", "b", "a"}, {"b", "c"}, {"a"}};

// Count-table add-k oracle for order-2 models, built independently of the
// model's id/count machinery.
struct BigramOracle {
  std::map<std::pair<std::string, std::string>, double> counts;
  std::map<std::string, double> totals;
  std::map<std::string, bool> known;
  double k;
  double outcome_count;

  BigramOracle(const Sentences& train, double k) : k(k) {
    for (const auto& s : train)
      for (const std::string& t : s) known[t] = true;
    outcome_count = static_cast<double>(known.size()) + 2;  // + UNK + EOS
    for (const auto& s : train) {
      std::string prev = NGramModel::kBos;
      for (const std::string& t : s) {
        counts[{prev, t}] += 1;
        totals[prev] += 1;
        prev = t;
      }
      counts[{prev, NGramModel::kEos}] += 1;
      totals[prev] += 1;
    }
  }

  std::string map(const std::string& t) const {
    if (t == NGramModel::kBos || t == NGramModel::kEos) return t;
    return known.count(t) ? t : NGramModel::kUnk;
  }

  double prob(const std::string& ctx_raw, const std::string& tok_raw) const {
    std::string ctx = map(ctx_raw), tok = map(tok_raw);
    double c = 0, total = 0;
    if (auto it = counts.find({ctx, tok}); it != counts.end()) c = it->second;
    if (auto it = totals.find(ctx); it != totals.end()) total = it->second;
    return (c + k) / (total + k * outcome_count);
  }

  double sentence_nll(const std::vector<std::string>& tokens) const {
    double nll = 0;
    std::string prev = NGramModel::kBos;
    for (const std::string& t : tokens) {
      nll -= std::log(prob(prev, t));
      prev = map(t);
    }
    nll -= std::log(prob(prev, NGramModel::kEos));
    return nll;
  }
};

}  // namespace

TEST_CASE("a deterministic corpus scores at perplexity exactly one") {
  NGramModel m(2, Smoothing::mle());
  m.train({{"a", "b"}, {"a", "b"}, {"a", "b"}});
  SentenceScore s = m.score_sentence({"a", "b"});
  CHECK(s.perplexity == 1.0);
  CHECK(s.token_count == 3);  // two words plus the end marker
  CHECK(m.sentence_log_prob({"a", "b"}) == 0.0);
}

TEST_CASE("a uniform unigram model scores at perplexity exactly V") {
  // Three types plus the end-of-sentence outcome, each with count 4:
  // every scored position has probability 1/4, so perplexity is exactly
  // V = 4 (and stays exact for V = 8).
  NGramModel m(1, Smoothing::mle());
  m.train({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}});
  CHECK(m.score_sentence({"c", "a"}).perplexity == 4.0);

  NGramModel m8(1, Smoothing::mle());
  Sentences seven(2, {"t1", "t2", "t3", "t4", "t5", "t6", "t7"});
  m8.train(seven);
  CHECK(m8.score_sentence({"t5"}).perplexity == 8.0);
}

TEST_CASE("add-1 bigram probabilities match the count-table oracle") {
  NGramModel m(2, Smoothing::add_k(1.0));
  m.train(kSmall);
  BigramOracle oracle(kSmall, 1.0);

  std::vector<std::string> contexts = {"a", "b", "c", "zzz",
                                       NGramModel::kUnk};
  std::vector<std::string> targets = {"a", "b", "c", "zzz", NGramModel::kUnk,
                                      NGramModel::kEos};
  for (const auto& ctx : contexts)
    for (const auto& tok : targets) {
      double got = m.prob({ctx}, tok);
      double want = oracle.prob(ctx, tok);
      CHECK(std::abs(got - want) <= 1e-10 * want);
    }
  // Sentence-initial positions use the BOS context.
  for (const auto& tok : targets) {
    double got = m.prob({}, tok);
    double want = oracle.prob(NGramModel::kBos, tok);
    CHECK(std::abs(got - want) <= 1e-10 * want);
  }

  // Whole-sentence scores agree with the oracle's accumulated NLL.
  for (const auto& sentence :
       Sentences{{"a", "b", "c"}, {"c", "zzz", "a"}, {"b"}, {"zzz"}}) {
    double nll = oracle.sentence_nll(sentence);
    double T = static_cast<double>(sentence.size()) + 1;
    double want = std::exp(nll / T);
    double got = m.score_sentence(sentence).perplexity;
    CHECK(std::abs(got - want) <= 1e-10 * want);
  }
}

TEST_CASE("fractional add-k matches the oracle too") {
  NGramModel m(2, Smoothing::add_k(0.37));
  m.train(kSmall);
  BigramOracle oracle(kSmall, 0.37);
  for (const auto& ctx : {"a", "b", "zzz"})
    for (const auto& tok : {"a", "c", "zzz"}) {
      double want = oracle.prob(ctx, tok);
      CHECK(std::abs(m.prob({ctx}, tok) - want) <= 1e-10 * want);
    }
}

TEST_CASE("probabilities sum to one over the outcome space") {
  // Holds for every smoothing mode and for seen, unseen, and padded
  // contexts alike (MLE sums to one only where the context was seen).
  Sentences train = {{"a", "b", "a", "c"}, {"b", "b", "c"}, {"a"},
                     {"c", "a", "b"}};
  for (Smoothing sm : {Smoothing::add_k(1.0), Smoothing::add_k(0.2),
                       Smoothing::kneser_ney()}) {
    for (int order : {1, 2, 3}) {
      NGramModel m(order, sm);
      m.train(train);
      std::vector<std::vector<std::string>> contexts = {
          {}, {"a"}, {"b", "a"}, {"zzz"}, {"a", "zzz"}, {"c", "b"}};
      for (const auto& ctx : contexts) {
        double sum = 0;
        for (const auto& tok : m.outcomes()) {
          double p = m.prob(ctx, tok);
          CHECK(p > 0.0);
          sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("kneser-ney falls back to shorter contexts it has seen") {
  // The {a, d} sentence keeps the corpus non-degenerate: d is the only
  // token with a single distinct predecessor, so the unigram continuation
  // counts have a singleton and real discounts exist at every level.
  Sentences train = {
      {"a", "b", "a", "c"}, {"b", "b", "c"}, {"c", "a", "b"}, {"a", "d"}};
  NGramModel m(3, Smoothing::kneser_ney());
  m.train(train);
  REQUIRE(m.effective_smoothing().kind == SmoothingKind::KneserNey);
  // Unseen full-length contexts put no mass on the top level, so only the
  // tail matters: (zzz, a) and (qqq, a) must give identical distributions.
  for (const auto& tok : m.outcomes())
    CHECK(m.prob({"zzz", "a"}, tok) ==
          doctest::Approx(m.prob({"qqq", "a"}, tok)).epsilon(1e-12));
  // Hand-computed backoff for p(d | unseen, a). Continuation counts:
  // level-2 context "a" covers {(a,b):2, (a,c):1, (a,d):1}; level-1 counts
  // are a:3 b:3 c:3 eos:3 d:1. Discounts D2 = 11/15 (n1=11, n2=2) and
  // D1 = 1 (n1=1, n2=0); six outcome types. So
  //   p1(d)   = 0 + 1 * (5/13) * (1/6)          = 5/78
  //   p2(d|a) = (1 - 11/15)/4 + (11/15)(3/4) * 5/78 = 1/15 + 11/312
  //           = 53/520.
  CHECK(m.prob({"zzz", "a"}, "d") ==
        doctest::Approx(53.0 / 520.0).epsilon(1e-12));
  // A fully unknown context and tail cascade to the unigram level; a bare
  // unknown one-token context lands in the same place.
  for (const auto& tok : m.outcomes())
    CHECK(m.prob({"zzz", "qqq"}, tok) ==
          doctest::Approx(m.prob({"qqq"}, tok)).epsilon(1e-12));
}

TEST_CASE("kneser-ney without singleton grams falls back to add-1") {
  NGramModel m(2, Smoothing::kneser_ney());
  m.train({{"a", "b"}, {"a", "b"}});  // every gram occurs twice
  CHECK(m.smoothing().kind == SmoothingKind::KneserNey);
  CHECK(m.effective_smoothing().kind == SmoothingKind::AddK);
  CHECK(m.effective_smoothing().k == 1.0);

  BigramOracle oracle({{"a", "b"}, {"a", "b"}}, 1.0);
  for (const auto& ctx : {"a", "b"})
    for (const auto& tok : {"a", "b"}) {
      double want = oracle.prob(ctx, tok);
      CHECK(std::abs(m.prob({ctx}, tok) - want) <= 1e-10 * want);
    }
}

TEST_CASE("the two scoring paths agree") {
  Sentences train = {{"a", "b", "a", "c"}, {"b", "b", "c"}, {"a"},
                     {"c", "a", "b"}, {"b", "a"}};
  for (Smoothing sm :
       {Smoothing::add_k(1.0), Smoothing::kneser_ney(), Smoothing::mle()}) {
    NGramModel m(3, sm);
    m.train(train);
    for (const auto& sentence :
         Sentences{{"a", "b", "a", "c"}, {"b", "b", "c"}, {"a", "c", "b"}}) {
      double lp = m.sentence_log_prob(sentence);
      SentenceScore s = m.score_sentence(sentence);
      if (!std::isfinite(lp)) {
        CHECK(std::isinf(s.perplexity));
        continue;
      }
      double want = std::exp(-lp / static_cast<double>(s.token_count));
      CHECK(s.perplexity == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("MLE gives infinite perplexity to unseen events") {
  NGramModel m(2, Smoothing::mle());
  m.train({{"a", "b"}});
  CHECK(std::isinf(m.score_sentence({"b", "a"}).perplexity));
  CHECK(m.sentence_log_prob({"b", "a"}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("reserved tokens are rejected in training data") {
  NGramModel m(2, Smoothing::add_k(1.0));
  CHECK_THROWS_AS(m.train({{"<s>", "a"}}), NGramError);
  NGramModel m2(2, Smoothing::add_k(1.0));
  CHECK_THROWS_AS(m2.train({{"a", "</s>"}}), NGramError);
  NGramModel m3(2, Smoothing::add_k(1.0));
  CHECK_THROWS_AS(m3.train({{"<unk>"}}), NGramError);
}

TEST_CASE("BOS is never a scoreable outcome") {
  NGramModel m(2, Smoothing::add_k(1.0));
  m.train(kSmall);
  CHECK(m.prob({"a"}, NGramModel::kBos) == 0.0);
  for (const auto& o : m.outcomes()) CHECK(o != NGramModel::kBos);
}

TEST_CASE("model vocabulary bookkeeping") {
  NGramModel m(2, Smoothing::add_k(0.5));
  m.train(kSmall);
  auto outs = m.outcomes();
  REQUIRE(outs.size() == 5);
  CHECK(outs[0] == NGramModel::kUnk);
  CHECK(outs[1] == NGramModel::kEos);
  CHECK(outs[2] == "a");  // first-seen order
  CHECK(outs[3] == "b");
  CHECK(outs[4] == "c");
  CHECK(m.vocab_size() == 5);
}

TEST_CASE("training from a file matches training from token lists") {
  testutil::TempDir tmp;
  auto path = tmp.path() / "train.txt";
  {
    std::ofstream out(path);
    out << "a b a\nb c\na\n";
  }
  NGramModel from_file = train_ngram(path.string(), 2, Smoothing::add_k(1.0));
  NGramModel from_mem(2, Smoothing::add_k(1.0));
  from_mem.train(kSmall);
  for (const auto& ctx : {"a", "b", "c"})
    for (const auto& tok : {"a", "b", "c"})
      CHECK(from_file.prob({ctx}, tok) == from_mem.prob({ctx}, tok));
}

TEST_CASE("score_corpus scores each line and aggregates") {
  testutil::TempDir tmp;
  auto train_path = tmp.path() / "train.txt";
  auto test_path = tmp.path() / "test.txt";
  {
    std::ofstream out(train_path);
    out << "a b a\nb c\na\n";
    std::ofstream t(test_path);
    t << "a b\nc a\nb\n";
  }
  NGramModel m = train_ngram(train_path.string(), 2, Smoothing::add_k(1.0));
  std::vector<uint64_t> ids = {10, 20, 30};
  CorpusScore cs = score_corpus(m, test_path.string(), "000000", &ids);
  REQUIRE(cs.sentences.size() == 3);
  CHECK(cs.sentences[0].sentence_id == 10);
  CHECK(cs.sentences[2].sentence_id == 30);
  CHECK(cs.sentences[1].grammar_name == "000000");

  double mean = 0;
  for (const auto& s : cs.sentences) mean += s.perplexity;
  mean /= 3;
  CHECK(cs.mean_perplexity == doctest::Approx(mean).epsilon(1e-12));

  double nll = 0, tokens = 0;
  for (const auto& s : cs.sentences) {
    nll += std::log(s.perplexity) * static_cast<double>(s.token_count);
    tokens += static_cast<double>(s.token_count);
  }
  CHECK(cs.corpus_perplexity ==
        doctest::Approx(std::exp(nll / tokens)).epsilon(1e-9));

  // Default ids are line numbers; id count mismatches are rejected.
  CorpusScore line_ids = score_corpus(m, test_path.string(), "g");
  CHECK(line_ids.sentences[2].sentence_id == 2);
  std::vector<uint64_t> short_ids = {1};
  CHECK_THROWS_AS(score_corpus(m, test_path.string(), "g", &short_ids),
                  NGramError);

  // Blank lines are data errors, not empty sentences.
  {
    std::ofstream t(test_path);
    t << "a b\n\nb\n";
  }
  CHECK_THROWS_AS(score_corpus(m, test_path.string(), "g"), NGramError);
}

TEST_CASE("scores files round trip exactly") {
  testutil::TempDir tmp;
  auto path = (tmp.path() / "scores.tsv").string();
  std::vector<SentenceScore> rows = {
      {0, "000000", 23.125, 12},
      {7, "011101", 1.0000000000000002, 3},
      {12345678901234ULL, "111111", 6.02e23, 40},
  };
  write_scores(path, rows);
  auto back = read_scores(path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].sentence_id == rows[i].sentence_id);
    CHECK(back[i].grammar_name == rows[i].grammar_name);
    CHECK(back[i].perplexity == rows[i].perplexity);  // bitwise, via to_chars
    CHECK(back[i].token_count == rows[i].token_count);
  }

  // The header is part of the contract.
  auto lines = testutil::read_lines(path);
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "sentence_id\tgrammar\tperplexity\ttokens");
}

TEST_CASE("malformed scores files are rejected with a line number") {
  testutil::TempDir tmp;
  auto path = (tmp.path() / "scores.tsv").string();
  {
    std::ofstream out(path);
    out << "sentence_id\tgrammar\tperplexity\ttokens\n0\tg\tnot_a_number\t5\n";
  }
  try {
    read_scores(path);
    FAIL("expected NGramError");
  } catch (const NGramError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "wrong\theader\n";
  }
  CHECK_THROWS_AS(read_scores(path), NGramError);
}

TEST_CASE("split_tokens handles runs of whitespace") {
  CHECK(split_tokens("a b c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_tokens("  a\t b  ") == std::vector<std::string>{"a", "b"});
  CHECK(split_tokens("") == std::vector<std::string>{});
}

TEST_CASE("order and training state are guarded") {
  CHECK_THROWS_AS(NGramModel(0, Smoothing::mle()), NGramError);
  NGramModel m(2, Smoothing::mle());
  CHECK_THROWS_AS(m.score_sentence({"a"}), NGramError);  // untrained
  m.train(kSmall);
  CHECK_THROWS_AS(m.train(kSmall), NGramError);  // double training
}
