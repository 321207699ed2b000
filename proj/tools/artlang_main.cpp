// Command line front end: thin CLI11 wiring over the subcommand bodies.

#include <CLI11.hpp>

#include "artlang/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"artlang: switch-parameterized grammars, parallel corpora, "
               "n-gram scoring, and mixed-model analysis"};
  app.set_version_flag("--version", ARTLANG_VERSION);
  app.require_subcommand(1);

  artlang::GenerateOptions gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "Sample a parallel corpus across all switch settings");
  generate->add_option("--grammar", gen.grammar,
                       "grammar file, or 'builtin'");
  generate->add_option("--lexicon", gen.lexicon,
                       "lexicon file (default: builtin)");
  generate->add_option("--seed", gen.seed, "corpus seed");
  generate->add_option("--total", gen.total, "sentences per grammar");
  generate->add_option("--splits", gen.splits, "number of splits");
  generate
      ->add_option("--fractions", [&gen](const CLI::results_t& vals) {
        gen.train_fraction = std::stod(vals.at(0));
        gen.dev_fraction = std::stod(vals.at(1));
        gen.test_fraction = std::stod(vals.at(2));
        return true;
      })
      ->description("train/dev/test fractions")
      ->expected(3);
  generate->add_option("--max-expansions", gen.max_expansions,
                       "rule expansion cap per sentence");
  generate->add_option("--out", gen.out, "output directory");

  artlang::ScoreOptions sco;
  CLI::App* score = app.add_subcommand(
      "score", "Train per-split n-gram models and score test sets");
  score->add_option("--corpus", sco.corpus, "generate output directory");
  score->add_option("--order", sco.order, "n-gram order");
  score->add_option("--smoothing", sco.smoothing,
                    "mle | add_k[:k] | kneser_ney");
  score->add_option("--out", sco.out, "output directory");

  artlang::AnalyzeOptions ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Fit the mixed-effects model over sentence perplexities");
  analyze
      ->add_option("--scores", ana.scores,
                   "score .tsv files and/or directories of them")
      ->required();
  analyze->add_option("--out", ana.out, "output directory");
  analyze->add_option("--coding", ana.coding, "binary | pm1");
  analyze->add_flag("--reml", ana.reml, "restricted maximum likelihood");
  analyze->add_flag("--svg", ana.svg, "also write SVG figures");
  analyze->add_option("--label", ana.label, "density series label");
  analyze->add_option("--grammar", ana.grammar,
                      "grammar providing switch labels");

  artlang::ValidateOptions val;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a grammar and lexicon, optionally dump them");
  validate->add_option("--grammar", val.grammar,
                       "grammar file, or 'builtin'");
  validate->add_option("--lexicon", val.lexicon,
                       "lexicon file (default: builtin)");
  validate->add_flag("--dump-grammar", val.dump_grammar,
                     "print the grammar in file format");
  validate->add_flag("--dump-lexicon", val.dump_lexicon,
                     "print the lexicon in file format");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) return artlang::cmd_generate(gen);
  if (score->parsed()) return artlang::cmd_score(sco);
  if (analyze->parsed()) return artlang::cmd_analyze(ana);
  return artlang::cmd_validate(val);
}
