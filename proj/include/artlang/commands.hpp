#ifndef ARTLANG_COMMANDS_HPP
#define ARTLANG_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace artlang {

// Subcommand bodies, CLI-framework free so tests can drive them directly.
// Each returns a process exit status: 0 on success, 1 after printing
// "error: ..." to stderr.

struct GenerateOptions {
  std::string grammar = "builtin";  // grammar file path or "builtin"
  std::string lexicon;              // lexicon file path, empty = builtin
  uint64_t seed = 0;
  uint64_t total = 100000;
  int splits = 10;
  double train_fraction = 0.8;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  int max_expansions = 512;
  std::string out = "corpus";
};
int cmd_generate(const GenerateOptions& opt);

struct ScoreOptions {
  std::string corpus = "corpus";  // cmd_generate output directory
  int order = 3;
  std::string smoothing = "kneser_ney";  // mle | add_k[:k] | kneser_ney
  std::string out = "scores";
};
int cmd_score(const ScoreOptions& opt);

struct AnalyzeOptions {
  std::vector<std::string> scores;  // score files and/or directories of .tsv
  std::string out = "analysis";
  std::string coding = "binary";  // binary | pm1
  bool reml = false;
  bool svg = false;
  std::string label = "scores";     // density series label
  std::string grammar = "builtin";  // used only for switch labels
};
int cmd_analyze(const AnalyzeOptions& opt);

struct ValidateOptions {
  std::string grammar = "builtin";
  std::string lexicon;
  bool dump_grammar = false;
  bool dump_lexicon = false;
};
int cmd_validate(const ValidateOptions& opt);

}  // namespace artlang

#endif  // ARTLANG_COMMANDS_HPP
