#include "artlang/ngram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace artlang {

namespace {

constexpr int32_t kUnkId = 0;
constexpr int32_t kBosId = 1;
constexpr int32_t kEosId = 2;
constexpr int32_t kFirstTypeId = 3;

void append_id(std::string& key, int32_t id) {
  key.push_back(static_cast<char>(id & 0xFF));
  key.push_back(static_cast<char>((id >> 8) & 0xFF));
  key.push_back(static_cast<char>((id >> 16) & 0xFF));
  key.push_back(static_cast<char>((id >> 24) & 0xFF));
}

std::string key_of(const int32_t* ids, size_t n) {
  std::string key;
  key.reserve(n * 4);
  for (size_t i = 0; i < n; ++i) append_id(key, ids[i]);
  return key;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

NGramModel::NGramModel(int order, Smoothing smoothing)
    : order_(order), requested_(smoothing), effective_(smoothing) {
  if (order < 1)
    throw NGramError("order must be >= 1, got " + std::to_string(order));
  if (smoothing.kind == SmoothingKind::AddK && !(smoothing.k > 0.0))
    throw NGramError("add_k needs k > 0");
  grams_.resize(static_cast<size_t>(order) + 1);
  contexts_.resize(static_cast<size_t>(order) + 1);
  discount_.resize(static_cast<size_t>(order) + 1, 0.0);
}

int32_t NGramModel::id_of(const std::string& token) const {
  if (token == kBos) return kBosId;
  if (token == kEos) return kEosId;
  auto it = type_ids_.find(token);
  return it == type_ids_.end() ? kUnkId : it->second;
}

void NGramModel::train(
    const std::vector<std::vector<std::string>>& sentences) {
  if (trained_) throw NGramError("model is already trained");
  if (sentences.empty()) throw NGramError("training corpus is empty");

  for (const auto& sent : sentences)
    for (const std::string& tok : sent) {
      if (tok == kUnk || tok == kBos || tok == kEos)
        throw NGramError("training corpus contains reserved token '" + tok +
                         "'");
      if (type_ids_.emplace(tok, kFirstTypeId +
                                     static_cast<int32_t>(types_.size()))
              .second)
        types_.push_back(tok);
    }
  outcome_count_ = types_.size() + 2;  // + UNK + EOS

  // Raw top-level counts over scored positions: the m real tokens plus
  // EOS, each conditioned on the preceding order-1 tokens (BOS-padded).
  auto& top = grams_[order_];
  std::vector<int32_t> padded;
  for (const auto& sent : sentences) {
    padded.clear();
    padded.assign(static_cast<size_t>(order_ - 1), kBosId);
    for (const std::string& tok : sent) padded.push_back(id_of(tok));
    padded.push_back(kEosId);
    for (size_t p = static_cast<size_t>(order_ - 1); p < padded.size(); ++p)
      top[key_of(&padded[p + 1 - order_], static_cast<size_t>(order_))] +=
          1.0;
  }

  if (requested_.kind == SmoothingKind::KneserNey) {
    // Continuation counts: a level-k gram's count is its number of
    // distinct one-token left extensions at level k+1. Iterating the
    // distinct level-(k+1) keys counts each extension exactly once.
    for (int level = order_ - 1; level >= 1; --level)
      for (const auto& [key, c] : grams_[level + 1])
        grams_[level][key.substr(4)] += 1.0;

    bool degenerate = false;
    for (int level = 1; level <= order_; ++level) {
      size_t n1 = 0, n2 = 0;
      for (const auto& [key, c] : grams_[level]) {
        if (c == 1.0) ++n1;
        if (c == 2.0) ++n2;
      }
      if (n1 == 0) {
        degenerate = true;
        break;
      }
      discount_[level] =
          static_cast<double>(n1) / (static_cast<double>(n1) + 2.0 * n2);
    }
    if (degenerate) effective_ = Smoothing::add_k(1.0);
  }

  int top_only = effective_.kind == SmoothingKind::KneserNey ? 1 : order_;
  for (int level = top_only; level <= order_; ++level)
    for (const auto& [key, c] : grams_[level]) {
      ContextStats& cs = contexts_[level][key.substr(0, key.size() - 4)];
      cs.total += c;
      cs.distinct += 1;
    }
  trained_ = true;
}

double NGramModel::kn_prob(int level, std::string_view ctx_key,
                           int32_t token) const {
  if (level == 0) return 1.0 / static_cast<double>(outcome_count_);
  std::string_view shorter =
      ctx_key.size() >= 4 ? ctx_key.substr(4) : std::string_view{};
  auto cit = contexts_[level].find(std::string(ctx_key));
  if (cit == contexts_[level].end() || cit->second.total == 0.0)
    return kn_prob(level - 1, shorter, token);  // unseen context

  std::string gram(ctx_key);
  append_id(gram, token);
  auto git = grams_[level].find(gram);
  double c = git == grams_[level].end() ? 0.0 : git->second;
  double total = cit->second.total;
  double d = discount_[level];
  return std::max(c - d, 0.0) / total +
         d * cit->second.distinct / total * kn_prob(level - 1, shorter, token);
}

double NGramModel::prob_ids(const std::vector<int32_t>& context,
                            int32_t token) const {
  std::string ctx_key = key_of(context.data(), context.size());
  if (effective_.kind == SmoothingKind::KneserNey)
    return kn_prob(order_, ctx_key, token);

  auto cit = contexts_[order_].find(ctx_key);
  double total = cit == contexts_[order_].end() ? 0.0 : cit->second.total;
  std::string gram = std::move(ctx_key);
  append_id(gram, token);
  auto git = grams_[order_].find(gram);
  double c = git == grams_[order_].end() ? 0.0 : git->second;
  if (effective_.kind == SmoothingKind::MLE)
    return total == 0.0 ? 0.0 : c / total;
  double k = effective_.k;
  return (c + k) / (total + k * static_cast<double>(outcome_count_));
}

double NGramModel::prob(const std::vector<std::string>& context,
                        const std::string& token) const {
  if (!trained_) throw NGramError("model is not trained");
  if (token == kBos) return 0.0;  // BOS is never an outcome
  std::vector<int32_t> ctx(static_cast<size_t>(order_ - 1), kBosId);
  size_t take = std::min(ctx.size(), context.size());
  for (size_t i = 0; i < take; ++i)
    ctx[ctx.size() - take + i] = id_of(context[context.size() - take + i]);
  return prob_ids(ctx, id_of(token));
}

double NGramModel::sentence_log_prob(
    const std::vector<std::string>& tokens) const {
  if (!trained_) throw NGramError("model is not trained");
  std::vector<int32_t> padded(static_cast<size_t>(order_ - 1), kBosId);
  for (const std::string& tok : tokens) padded.push_back(id_of(tok));
  padded.push_back(kEosId);
  double lp = 0.0;
  std::vector<int32_t> ctx(static_cast<size_t>(order_ - 1));
  for (size_t p = static_cast<size_t>(order_ - 1); p < padded.size(); ++p) {
    ctx.assign(padded.begin() + static_cast<ptrdiff_t>(p + 1 - order_),
               padded.begin() + static_cast<ptrdiff_t>(p));
    lp += std::log(prob_ids(ctx, padded[p]));
  }
  return lp;
}

SentenceScore NGramModel::score_sentence(
    const std::vector<std::string>& tokens) const {
  if (!trained_) throw NGramError("model is not trained");
  // Base-2 accumulation keeps the deterministic cases exact (log2/exp2
  // are exact on powers of two); mathematically identical to the ln form.
  std::vector<int32_t> padded(static_cast<size_t>(order_ - 1), kBosId);
  for (const std::string& tok : tokens) padded.push_back(id_of(tok));
  padded.push_back(kEosId);
  double lp2 = 0.0;
  std::vector<int32_t> ctx(static_cast<size_t>(order_ - 1));
  for (size_t p = static_cast<size_t>(order_ - 1); p < padded.size(); ++p) {
    ctx.assign(padded.begin() + static_cast<ptrdiff_t>(p + 1 - order_),
               padded.begin() + static_cast<ptrdiff_t>(p));
    lp2 += std::log2(prob_ids(ctx, padded[p]));
  }
  SentenceScore s;
  s.token_count = tokens.size() + 1;
  s.perplexity = std::exp2(-lp2 / static_cast<double>(s.token_count));
  return s;
}

std::vector<std::string> NGramModel::outcomes() const {
  std::vector<std::string> out;
  out.reserve(outcome_count_);
  out.emplace_back(kUnk);
  out.emplace_back(kEos);
  out.insert(out.end(), types_.begin(), types_.end());
  return out;
}

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

namespace {

std::vector<std::vector<std::string>> read_token_lines(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NGramError("cannot open corpus file '" + path + "'");
  std::vector<std::vector<std::string>> lines;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> toks = split_tokens(line);
    if (toks.empty())
      throw NGramError("blank line " + std::to_string(lineno) + " in '" +
                       path + "'");
    lines.push_back(std::move(toks));
  }
  return lines;
}

}  // namespace

NGramModel train_ngram(const std::string& path, int order,
                       Smoothing smoothing) {
  std::vector<std::vector<std::string>> sentences = read_token_lines(path);
  if (sentences.empty())
    throw NGramError("training corpus '" + path + "' is empty");
  NGramModel model(order, smoothing);
  model.train(sentences);
  return model;
}

CorpusScore score_corpus(const NGramModel& model, const std::string& path,
                         const std::string& grammar_name,
                         const std::vector<uint64_t>* ids) {
  std::vector<std::vector<std::string>> lines = read_token_lines(path);
  if (lines.empty())
    throw NGramError("test corpus '" + path + "' is empty");
  if (ids && ids->size() != lines.size())
    throw NGramError("id list has " + std::to_string(ids->size()) +
                     " entries for " + std::to_string(lines.size()) +
                     " lines");
  CorpusScore out;
  out.sentences.reserve(lines.size());
  double sum_ppl = 0.0;
  double nll2 = 0.0, positions = 0.0;
  for (size_t i = 0; i < lines.size(); ++i) {
    SentenceScore s = model.score_sentence(lines[i]);
    s.sentence_id = ids ? (*ids)[i] : static_cast<uint64_t>(i);
    s.grammar_name = grammar_name;
    sum_ppl += s.perplexity;
    nll2 += static_cast<double>(s.token_count) * std::log2(s.perplexity);
    positions += static_cast<double>(s.token_count);
    out.sentences.push_back(std::move(s));
  }
  out.mean_perplexity = sum_ppl / static_cast<double>(lines.size());
  out.corpus_perplexity = std::exp2(nll2 / positions);
  return out;
}

void write_scores(const std::string& path,
                  const std::vector<SentenceScore>& scores) {
  std::ofstream out(path);
  if (!out) throw NGramError("cannot write scores file '" + path + "'");
  out << "sentence_id\tgrammar\tperplexity\ttokens\n";
  for (const SentenceScore& s : scores)
    out << s.sentence_id << '\t' << s.grammar_name << '\t'
        << format_double(s.perplexity) << '\t' << s.token_count << '\n';
  if (!out) throw NGramError("write failure on '" + path + "'");
}

std::vector<SentenceScore> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NGramError("cannot open scores file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) ||
      line != "sentence_id\tgrammar\tperplexity\ttokens")
    throw NGramError("'" + path + "' is missing the scores header");
  std::vector<SentenceScore> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = path + ":" + std::to_string(lineno);
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4)
      throw NGramError(where + ": expected 4 tab-separated columns, got " +
                       std::to_string(cols.size()));
    SentenceScore s;
    auto parse_u64 = [&](const std::string& text, const char* what) {
      uint64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size())
        throw NGramError(where + ": malformed " + what + " '" + text + "'");
      return v;
    };
    s.sentence_id = parse_u64(cols[0], "sentence_id");
    s.grammar_name = cols[1];
    {
      auto [p, ec] = std::from_chars(cols[2].data(),
                                     cols[2].data() + cols[2].size(),
                                     s.perplexity);
      if (ec != std::errc() || p != cols[2].data() + cols[2].size())
        throw NGramError(where + ": malformed perplexity '" + cols[2] + "'");
    }
    s.token_count = parse_u64(cols[3], "tokens");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace artlang
