#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "artlang/commands.hpp"
#include "artlang/grammar.hpp"
#include "artlang/lexicon.hpp"
#include "artlang/sampler.hpp"
#include "artlang/switching.hpp"

namespace py = pybind11;

namespace {

artlang::Lexicon lexicon_from(const std::string& text) {
  return text.empty() ? artlang::builtin_lexicon()
                      : artlang::parse_lexicon(text);
}

artlang::Grammar grammar_from(const std::string& text,
                              const artlang::Lexicon& lex) {
  if (text.empty() || text == "builtin") return artlang::base_grammar(lex);
  return artlang::parse_grammar(text);
}

void check(int status, const char* what) {
  if (status != 0)
    throw std::runtime_error(std::string(what) +
                             " failed; details were printed to stderr");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "switch-parameterized grammar toolkit";
  m.attr("__version__") = ARTLANG_VERSION;

  m.def("builtin_grammar_text", [] {
    return artlang::base_grammar_text(artlang::builtin_lexicon());
  });
  m.def("builtin_lexicon_text", [] {
    return artlang::serialize_lexicon(artlang::builtin_lexicon());
  });

  m.def(
      "validate_grammar",
      [](const std::string& grammar_text, const std::string& lexicon_text) {
        artlang::Lexicon lex = lexicon_from(lexicon_text);
        artlang::Grammar g =
            (grammar_text.empty() || grammar_text == "builtin")
                ? artlang::base_grammar(lex)
                : artlang::parse_grammar_unvalidated(grammar_text);
        py::list out;
        for (const auto& d : artlang::validate(g)) {
          py::dict item;
          item["invariant"] = d.invariant;
          item["subject"] = d.subject;
          item["message"] = d.message;
          out.append(item);
        }
        return out;
      },
      py::arg("grammar_text") = "builtin", py::arg("lexicon_text") = "",
      "Grammar invariant diagnostics; an empty list means valid.");

  m.def(
      "switch_names",
      [](const std::string& grammar_text, const std::string& lexicon_text) {
        artlang::Lexicon lex = lexicon_from(lexicon_text);
        return grammar_from(grammar_text, lex).switches();
      },
      py::arg("grammar_text") = "builtin", py::arg("lexicon_text") = "");

  m.def(
      "enumerate_grammars",
      [](int k) {
        std::vector<std::string> names;
        for (const auto& v : artlang::enumerate_switch_vectors(k))
          names.push_back(v.name);
        return names;
      },
      py::arg("k"), "All 2**k switch configurations in name order.");

  m.def(
      "word_order",
      [](const std::string& name) {
        return std::string(artlang::word_order_name(
            artlang::word_order_of(artlang::SwitchVector::from_name(name))));
      },
      py::arg("name"),
      "Basic word order (SOV/SVO/OVS/VOS) for a configuration name.");

  m.def(
      "sample_yields",
      [](const std::string& switch_name, uint64_t count, uint64_t seed,
         const std::string& grammar_text, const std::string& lexicon_text,
         int max_expansions) {
        artlang::Lexicon lex = lexicon_from(lexicon_text);
        artlang::Grammar g = grammar_from(grammar_text, lex);
        artlang::SwitchVector v =
            artlang::SwitchVector::from_name(switch_name);
        artlang::SampleConfig cfg;
        cfg.seed = seed;
        cfg.count = count;
        cfg.max_expansions = max_expansions;
        std::vector<std::string> out;
        for (const auto& t : artlang::sample(g, cfg))
          out.push_back(artlang::join_tokens(artlang::yield_of(t, v, g)));
        return out;
      },
      py::arg("switch_name"), py::arg("count"), py::arg("seed") = 0,
      py::arg("grammar_text") = "builtin", py::arg("lexicon_text") = "",
      py::arg("max_expansions") = 512,
      "Sentences sampled at the given configuration; sentence i depends on "
      "(seed, i) only, so the same call is parallel across configurations.");

  m.def(
      "generate",
      [](const std::string& out, const std::string& grammar,
         const std::string& lexicon, uint64_t seed, uint64_t total,
         int splits, double train_fraction, double dev_fraction,
         double test_fraction, int max_expansions) {
        artlang::GenerateOptions opt;
        opt.out = out;
        opt.grammar = grammar;
        opt.lexicon = lexicon;
        opt.seed = seed;
        opt.total = total;
        opt.splits = splits;
        opt.train_fraction = train_fraction;
        opt.dev_fraction = dev_fraction;
        opt.test_fraction = test_fraction;
        opt.max_expansions = max_expansions;
        check(artlang::cmd_generate(opt), "generate");
      },
      py::arg("out"), py::arg("grammar") = "builtin",
      py::arg("lexicon") = "", py::arg("seed") = 0,
      py::arg("total") = 100000, py::arg("splits") = 10,
      py::arg("train_fraction") = 0.8, py::arg("dev_fraction") = 0.1,
      py::arg("test_fraction") = 0.1, py::arg("max_expansions") = 512,
      "Write the full parallel corpus tree under `out`.");

  m.def(
      "score",
      [](const std::string& corpus, const std::string& out, int order,
         const std::string& smoothing) {
        artlang::ScoreOptions opt;
        opt.corpus = corpus;
        opt.out = out;
        opt.order = order;
        opt.smoothing = smoothing;
        check(artlang::cmd_score(opt), "score");
      },
      py::arg("corpus"), py::arg("out"), py::arg("order") = 3,
      py::arg("smoothing") = "kneser_ney",
      "Train per-grammar n-gram models and score the held-out test lines.");

  m.def(
      "analyze",
      [](const std::vector<std::string>& scores, const std::string& out,
         const std::string& coding, bool reml, bool svg,
         const std::string& label, const std::string& grammar) {
        artlang::AnalyzeOptions opt;
        opt.scores = scores;
        opt.out = out;
        opt.coding = coding;
        opt.reml = reml;
        opt.svg = svg;
        opt.label = label;
        opt.grammar = grammar;
        check(artlang::cmd_analyze(opt), "analyze");
      },
      py::arg("scores"), py::arg("out"), py::arg("coding") = "binary",
      py::arg("reml") = false, py::arg("svg") = false,
      py::arg("label") = "scores", py::arg("grammar") = "builtin",
      "Fit the random-intercept model to score tables and write reports.");
}
