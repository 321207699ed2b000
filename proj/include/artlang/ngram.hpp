#ifndef ARTLANG_NGRAM_HPP
#define ARTLANG_NGRAM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace artlang {

struct NGramError : std::runtime_error {
  explicit NGramError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class SmoothingKind { MLE, AddK, KneserNey };

struct Smoothing {
  SmoothingKind kind = SmoothingKind::KneserNey;
  double k = 1.0;  // AddK pseudo-count

  static Smoothing mle() { return {SmoothingKind::MLE, 0.0}; }
  static Smoothing add_k(double k) { return {SmoothingKind::AddK, k}; }
  static Smoothing kneser_ney() { return {SmoothingKind::KneserNey, 0.0}; }
};

struct SentenceScore {
  uint64_t sentence_id = 0;
  std::string grammar_name;
  double perplexity = 1.0;
  uint64_t token_count = 0;  // scored positions, final EOS included
};

// Fixed-order n-gram model. Sentences are padded with order-1 BOS tokens
// (context only, never scored) and terminated by a scored EOS, so a
// sentence of m tokens is scored at T = m+1 positions:
//
//   perplexity = exp(-(1/T) sum_t ln p(w_t | w_{t-order+1..t-1}))
//
// The outcome space E is {observed types} + UNK + EOS; unseen tokens map
// to UNK at scoring time. Under MLE a zero-probability event yields
// infinite perplexity rather than an error. Kneser-Ney is interpolated at
// every level with one absolute discount per level, D = n1/(n1+2*n2) from
// that level's count-of-counts, grounded in a uniform distribution over
// E; when some level has no count-1 grams the discount formula collapses
// and the model silently falls back to add_k(1), reported by
// effective_smoothing().
class NGramModel {
 public:
  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";

  NGramModel(int order, Smoothing smoothing);

  void train(const std::vector<std::vector<std::string>>& sentences);

  // p(token | context), where context is truncated/padded with BOS on the
  // left to order-1 tokens. Usable for exhaustive sum-to-1 checks.
  double prob(const std::vector<std::string>& context,
              const std::string& token) const;

  // Natural-log joint probability of the padded sentence; -inf if any
  // position has zero probability.
  double sentence_log_prob(const std::vector<std::string>& tokens) const;

  SentenceScore score_sentence(const std::vector<std::string>& tokens) const;

  int order() const { return order_; }
  Smoothing smoothing() const { return requested_; }
  Smoothing effective_smoothing() const { return effective_; }
  // All scoreable outcomes: UNK, EOS, then observed types in first-seen
  // order. BOS is excluded (it is never a target).
  std::vector<std::string> outcomes() const;
  size_t vocab_size() const { return outcome_count_; }

 private:
  using Key = std::string;  // 4-byte little-endian token ids

  double prob_ids(const std::vector<int32_t>& context, int32_t token) const;
  double kn_prob(int level, std::string_view ctx_key, int32_t token) const;
  int32_t id_of(const std::string& token) const;

  int order_;
  Smoothing requested_;
  Smoothing effective_;
  bool trained_ = false;
  std::vector<std::string> types_;  // observed types, first-seen order
  std::unordered_map<std::string, int32_t> type_ids_;
  size_t outcome_count_ = 0;  // |E|

  // Index 1..order: gram counts per level (raw at the top level,
  // continuation counts below it, Kneser-Ney only) and per-context
  // {total, distinct-continuations}. MLE/AddK fill only the top level.
  std::vector<std::unordered_map<Key, double>> grams_;
  struct ContextStats {
    double total = 0.0;
    uint32_t distinct = 0;
  };
  std::vector<std::unordered_map<Key, ContextStats>> contexts_;
  std::vector<double> discount_;  // per level, Kneser-Ney
};

NGramModel train_ngram(const std::string& path, int order,
                       Smoothing smoothing);

struct CorpusScore {
  std::vector<SentenceScore> sentences;
  // Mean of per-sentence perplexities: the number that feeds analysis.
  double mean_perplexity = 0.0;
  // Token-weighted exp of mean NLL, reported alongside for reference.
  double corpus_perplexity = 0.0;
};

// Scores every line of the file. sentence_id is the 0-based line index
// unless ids supplies one id per line (the CLI passes global corpus
// indices so scores from different splits never collide).
CorpusScore score_corpus(const NGramModel& model, const std::string& path,
                         const std::string& grammar_name,
                         const std::vector<uint64_t>* ids = nullptr);

// Tab-separated scores exchange format, the contract external scorers
// write: header line "sentence_id\tgrammar\tperplexity\ttokens", '.'
// decimals, scientific notation permitted.
void write_scores(const std::string& path,
                  const std::vector<SentenceScore>& scores);
std::vector<SentenceScore> read_scores(const std::string& path);

std::vector<std::string> split_tokens(std::string_view line);

}  // namespace artlang

#endif  // ARTLANG_NGRAM_HPP
