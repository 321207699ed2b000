#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>

#include "artlang/commands.hpp"
#include "artlang/corpus.hpp"
#include "artlang/manifest.hpp"
#include "artlang/reports.hpp"
#include "test_util.hpp"

using namespace artlang;

namespace {

// One small corpus/score/analysis pipeline shared by several cases.
struct Pipeline {
  testutil::TempDir tmp;
  std::filesystem::path corpus_dir, scores_dir, analysis_dir;

  Pipeline() {
    corpus_dir = tmp.path() / "corpus";
    scores_dir = tmp.path() / "scores";
    analysis_dir = tmp.path() / "analysis";
  }

  int generate() {
    GenerateOptions g;
    g.total = 400;
    g.splits = 2;
    g.seed = 21;
    g.out = corpus_dir.string();
    return cmd_generate(g);
  }
  int score() {
    ScoreOptions s;
    s.corpus = corpus_dir.string();
    s.order = 3;
    s.out = scores_dir.string();
    return cmd_score(s);
  }
  int analyze(bool svg = false) {
    AnalyzeOptions a;
    a.scores = {scores_dir.string()};
    a.out = analysis_dir.string();
    a.svg = svg;
    return cmd_analyze(a);
  }
};

}  // namespace

TEST_CASE("generate, score and analyze chain end to end") {
  Pipeline p;
  REQUIRE(p.generate() == 0);

  // 64 grammars x 2 splits, 160/20/20 lines each.
  auto names = ParallelCorpus(
                   {.sentences_total = 400, .num_splits = 2}, 6)
                   .grammar_names();
  REQUIRE(names.size() == 64);
  for (const auto& name : {names.front(), names.back()}) {
    CHECK(testutil::count_lines(corpus_file_path(p.corpus_dir, name, 0,
                                                 Section::Train)) == 160);
    CHECK(testutil::count_lines(corpus_file_path(p.corpus_dir, name, 1,
                                                 Section::Test)) == 20);
  }
  CHECK(read_manifest(p.corpus_dir / "manifest.json")["seed"] == 21);

  REQUIRE(p.score() == 0);
  for (const auto& name : {names.front(), names.back()})
    for (int split = 0; split < 2; ++split) {
      auto path = p.scores_dir / ("grammar-" + name) /
                  ("split-" + std::to_string(split) + ".tsv");
      auto rows = read_scores(path.string());
      REQUIRE(rows.size() == 20);
      for (const auto& r : rows) {
        CHECK(r.grammar_name == name);
        CHECK(r.perplexity >= 1.0);
        CHECK(std::isfinite(r.perplexity));
      }
    }
  // Scores carry global sentence ids, so the two splits never collide and
  // every grammar scores the same sentences.
  {
    auto a = read_scores(
        (p.scores_dir / "grammar-000000" / "split-0.tsv").string());
    auto b = read_scores(
        (p.scores_dir / "grammar-111111" / "split-0.tsv").string());
    auto c = read_scores(
        (p.scores_dir / "grammar-000000" / "split-1.tsv").string());
    std::set<uint64_t> ids;
    for (const auto& r : a) ids.insert(r.sentence_id);
    for (const auto& r : c) CHECK(ids.insert(r.sentence_id).second);
    for (size_t i = 0; i < a.size(); ++i)
      CHECK(a[i].sentence_id == b[i].sentence_id);
  }
  CHECK(std::filesystem::exists(p.scores_dir / "summary.csv"));

  REQUIRE(p.analyze(true) == 0);
  for (const char* f : {"coefficients.csv", "heatmap.csv",
                        "group_report.csv", "density.csv", "fit.json",
                        "heatmap.svg", "density.svg"})
    CHECK(std::filesystem::exists(p.analysis_dir / f));

  // The coefficient table has the intercept plus 6 mains plus 15 pairs.
  auto coef_lines = testutil::read_lines(p.analysis_dir / "coefficients.csv");
  REQUIRE(coef_lines.size() == 23);
  CHECK(coef_lines[0] == "label,estimate,stderr");
  CHECK(coef_lines[1].rfind("intercept,", 0) == 0);
  CHECK(coef_lines[2].rfind("S,", 0) == 0);  // builtin switch labels

  auto group_lines = testutil::read_lines(p.analysis_dir / "group_report.csv");
  REQUIRE(group_lines.size() == 5);
  CHECK(group_lines[1].rfind("SOV,16,", 0) == 0);
  CHECK(group_lines[4].rfind("VOS,16,", 0) == 0);

  auto fit = read_manifest(p.analysis_dir / "fit.json");
  CHECK(fit["grammars"] == 64);
  CHECK(fit["sentences"] == 40);
  CHECK(fit["estimation"] == "ml");
  CHECK(fit["coefficients"].size() == 22);
  CHECK(fit["sigma2"].get<double>() > 0.0);

  auto svg = testutil::read_lines(p.analysis_dir / "heatmap.svg");
  REQUIRE(!svg.empty());
  CHECK(svg[0].rfind("<svg", 0) == 0);
}

TEST_CASE("score and analyze reject broken inputs with exit code 1") {
  testutil::TempDir tmp;
  ScoreOptions s;
  s.corpus = (tmp.path() / "nowhere").string();
  CHECK(cmd_score(s) == 1);

  AnalyzeOptions a;
  a.scores = {(tmp.path() / "missing.tsv").string()};
  a.out = (tmp.path() / "analysis").string();
  CHECK(cmd_analyze(a) == 1);

  // Incomplete grammar coverage is caught before fitting.
  auto f = (tmp.path() / "partial.tsv").string();
  write_scores(f, {{0, "000000", 2.0, 3}, {1, "000000", 2.5, 3}});
  a.scores = {f};
  CHECK(cmd_analyze(a) == 1);

  GenerateOptions g;
  g.grammar = (tmp.path() / "missing-grammar.txt").string();
  g.out = (tmp.path() / "corpus").string();
  CHECK(cmd_generate(g) == 1);

  GenerateOptions bad_plan;
  bad_plan.total = 101;  // does not divide into splits
  bad_plan.out = (tmp.path() / "corpus2").string();
  CHECK(cmd_generate(bad_plan) == 1);
}

TEST_CASE("validate reports diagnostics and dumps round-trippable text") {
  ValidateOptions v;
  CHECK(cmd_validate(v) == 0);

  testutil::TempDir tmp;
  auto bad = tmp.path() / "bad.grammar";
  {
    std::ofstream out(bad);
    out << "start S\nswitch W\nrule S -> A \"x\" : 1\nrule A -> \"a\" : 1\n";
  }
  ValidateOptions broken;
  broken.grammar = bad.string();
  CHECK(cmd_validate(broken) == 1);  // switch W tags nothing

  auto good = tmp.path() / "good.grammar";
  {
    std::ofstream out(good);
    out << "start S\nswitch W\nrule S -> A \"x\" : 1 @W\nrule A -> \"a\" : 1\n";
  }
  ValidateOptions ok;
  ok.grammar = good.string();
  CHECK(cmd_validate(ok) == 0);
}

TEST_CASE("generated corpora can be scored with every smoothing mode") {
  testutil::TempDir tmp;
  GenerateOptions g;
  g.total = 100;
  g.splits = 1;
  g.out = (tmp.path() / "corpus").string();
  REQUIRE(cmd_generate(g) == 0);

  for (const char* smoothing : {"mle", "add_k", "add_k:0.5", "kneser_ney"}) {
    ScoreOptions s;
    s.corpus = g.out;
    s.order = 2;
    s.smoothing = smoothing;
    s.out = (tmp.path() / ("scores-" + std::string(smoothing))).string();
    CAPTURE(smoothing);
    CHECK(cmd_score(s) == 0);
  }
  ScoreOptions bad;
  bad.corpus = g.out;
  bad.smoothing = "quadratic";
  bad.out = (tmp.path() / "scores-bad").string();
  CHECK(cmd_score(bad) == 1);
}

TEST_CASE("csv writers emit well-formed tables") {
  testutil::TempDir tmp;
  MixedModelFit fit;
  fit.beta.resize(4);
  fit.beta << 5.0, 1.5, -0.25, 0.125;
  fit.se.resize(4);
  fit.se << 0.5, 0.25, 0.125, 0.0625;
  fit.labels = {"intercept", "a", "b", "a:b"};
  auto coef = tmp.path() / "c.csv";
  write_coefficients_csv(coef, fit);
  auto lines = testutil::read_lines(coef);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "label,estimate,stderr");
  CHECK(lines[1] == "intercept,5,0.5");
  CHECK(lines[4] == "a:b,0.125,0.0625");

  CoefficientHeatmap h = coefficient_heatmap(fit, 2);
  auto heat = tmp.path() / "h.csv";
  write_heatmap_csv(heat, h);
  auto hl = testutil::read_lines(heat);
  REQUIRE(hl.size() == 5);  // header + 2x2
  CHECK(hl[0] == "row,column,value,stderr");
  CHECK(hl[1] == "a,a,1.5,0.25");
  CHECK(hl[2] == "a,b,0.125,0.0625");

  std::vector<GroupReportRow> rows = {{"SOV", 16, 12.5}, {"SVO", 16, 13.25}};
  auto gr = tmp.path() / "g.csv";
  write_group_csv(gr, rows);
  auto gl = testutil::read_lines(gr);
  REQUIRE(gl.size() == 3);
  CHECK(gl[1] == "SOV,16,12.5");

  DistributionReport rep = distribution_report({1, 2, 3, 4, 8}, "series");
  auto dc = tmp.path() / "d.csv";
  write_density_csv(dc, {rep});
  auto dl = testutil::read_lines(dc);
  REQUIRE(dl.size() == 513);
  CHECK(dl[0] == "label,x,density");
  CHECK(dl[1].rfind("series,", 0) == 0);

  std::string svg = density_svg({rep});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("series") != std::string::npos);
}

#ifdef ARTLANG_BIN
TEST_CASE("the installed binary parses its command line") {
  std::string bin = ARTLANG_BIN;
  CHECK(std::system((bin + " validate > /dev/null 2>&1").c_str()) == 0);
  CHECK(std::system((bin + " --help > /dev/null 2>&1").c_str()) == 0);
  CHECK(std::system((bin + " > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((bin + " frobnicate > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((bin + " validate --dump-grammar 2> /dev/null | head -1 "
                           "| grep -q '^start ROOT$'")
                        .c_str()) == 0);
}
#endif
