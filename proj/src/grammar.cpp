#include "artlang/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace artlang {

SymbolId Grammar::add_symbol(std::string_view name, SymbolKind kind) {
  auto it = symbol_index_.find(std::string(name));
  if (it != symbol_index_.end()) {
    Symbol& sym = symbols_[it->second];
    if (sym.kind != kind) {
      throw GrammarError("symbol '" + sym.name +
                         "' used as both terminal and nonterminal");
    }
    return it->second;
  }
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{std::string(name), kind});
  symbol_index_.emplace(std::string(name), id);
  return id;
}

SymbolId Grammar::find_symbol(std::string_view name) const {
  auto it = symbol_index_.find(std::string(name));
  return it == symbol_index_.end() ? -1 : it->second;
}

int Grammar::add_switch(std::string_view name) {
  auto it = switch_index_.find(std::string(name));
  if (it != switch_index_.end()) {
    throw GrammarError("duplicate switch '" + std::string(name) + "'");
  }
  int idx = static_cast<int>(switches_.size());
  switches_.emplace_back(name);
  switch_index_.emplace(std::string(name), idx);
  return idx;
}

int Grammar::find_switch(std::string_view name) const {
  auto it = switch_index_.find(std::string(name));
  return it == switch_index_.end() ? -1 : it->second;
}

RuleId Grammar::add_rule(SymbolId lhs, std::vector<SymbolId> rhs,
                         double weight, int switch_index) {
  RuleId id = static_cast<RuleId>(rules_.size());
  rules_.push_back(Rule{id, lhs, std::move(rhs), weight, switch_index});
  by_lhs_stale_ = true;
  return id;
}

std::span<const RuleId> Grammar::rules_for(SymbolId lhs) const {
  if (by_lhs_stale_) {
    by_lhs_.clear();
    for (const Rule& r : rules_) by_lhs_[r.lhs].push_back(r.id);
    by_lhs_stale_ = false;
  }
  auto it = by_lhs_.find(lhs);
  if (it == by_lhs_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::vector<RuleId> Grammar::rule_group(int switch_index) const {
  std::vector<RuleId> out;
  for (const Rule& r : rules_)
    if (r.switch_index == switch_index) out.push_back(r.id);
  return out;
}

std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;
  if (g.start() < 0) {
    out.push_back({"start symbol", "", "no start symbol declared"});
  } else if (g.is_terminal(g.start())) {
    out.push_back(
        {"start symbol", g.name(g.start()), "start symbol is a terminal"});
  } else if (g.rules_for(g.start()).empty()) {
    out.push_back(
        {"start symbol", g.name(g.start()), "start symbol has no rules"});
  }
  for (const Rule& r : g.rules()) {
    std::string where =
        "rule " + std::to_string(r.id) + " (" + g.name(r.lhs) + ")";
    if (r.rhs.empty())
      out.push_back({"empty rhs", where, "rule has an empty right-hand side"});
    if (!(r.weight > 0.0))
      out.push_back({"nonpositive weight", where,
                     "rule weight must be positive, got " +
                         std::to_string(r.weight)});
    if (r.switch_index >= 0 && r.rhs.size() < 2)
      out.push_back({"switch on unary rule", where,
                     "switch tag has no effect on a rhs shorter than 2"});
    if (r.switch_index >= g.num_switches())
      out.push_back({"undeclared switch", where,
                     "rule tagged with switch index " +
                         std::to_string(r.switch_index) +
                         " but only " + std::to_string(g.num_switches()) +
                         " switches are declared"});
    if (g.is_terminal(r.lhs))
      out.push_back({"terminal lhs", where, "rule lhs is a terminal"});
  }
  for (SymbolId s = 0; s < static_cast<SymbolId>(g.symbols().size()); ++s) {
    if (!g.is_terminal(s) && g.rules_for(s).empty() && s != g.start()) {
      // Dead only if actually reachable from some rhs.
      bool referenced = false;
      for (const Rule& r : g.rules())
        for (SymbolId t : r.rhs)
          if (t == s) referenced = true;
      if (referenced)
        out.push_back({"dead nonterminal", g.name(s),
                       "nonterminal appears on a rhs but has no rules"});
    }
  }
  for (int sw = 0; sw < g.num_switches(); ++sw) {
    if (g.rule_group(sw).empty())
      out.push_back({"unused switch", g.switches()[sw],
                     "switch is declared but tags no rule"});
  }
  return out;
}

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  int column = 0;
};

// Splits one line into whitespace-separated tokens, honoring "..." quoting.
// Quotes may not nest and must close on the same line.
std::vector<Token> tokenize_line(const std::string& line, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    int col = static_cast<int>(i) + 1;
    if (line[i] == '"') {
      size_t j = line.find('"', i + 1);
      if (j == std::string::npos)
        throw GrammarError("unterminated quote", lineno, col);
      std::string text = line.substr(i + 1, j - i - 1);
      if (text.empty()) throw GrammarError("empty quoted token", lineno, col);
      out.push_back({std::move(text), true, col});
      i = j + 1;
    } else {
      size_t j = i;
      while (j < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[j])) &&
             line[j] != '"' && line[j] != '#')
        ++j;
      out.push_back({line.substr(i, j - i), false, col});
      i = j;
    }
  }
  return out;
}

struct RawRule {
  std::string lhs;
  std::vector<Token> rhs;
  double weight = 0.0;
  std::string switch_name;
  int lineno = 0;
};

}  // namespace

Grammar parse_grammar_unvalidated(std::string_view text) {
  // Pass 1 collects declarations; pass 2 resolves symbol kinds, which need
  // the full LHS set (bare rhs tokens default to terminal unless some rule
  // defines them).
  std::string start_name;
  int start_line = 0;
  std::vector<std::string> switch_names;
  std::vector<RawRule> raw;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<Token> toks = tokenize_line(line, lineno);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    if (toks[0].quoted)
      throw GrammarError("directive may not be quoted", lineno,
                         toks[0].column);
    if (head == "start") {
      if (toks.size() != 2 || toks[1].quoted)
        throw GrammarError("expected: start <nonterminal>", lineno,
                           toks[0].column);
      if (!start_name.empty())
        throw GrammarError("duplicate start directive (first on line " +
                               std::to_string(start_line) + ")",
                           lineno, toks[0].column);
      start_name = toks[1].text;
      start_line = lineno;
    } else if (head == "switch") {
      if (toks.size() != 2 || toks[1].quoted)
        throw GrammarError("expected: switch <name>", lineno, toks[0].column);
      if (std::find(switch_names.begin(), switch_names.end(), toks[1].text) !=
          switch_names.end())
        throw GrammarError("duplicate switch '" + toks[1].text + "'", lineno,
                           toks[1].column);
      switch_names.push_back(toks[1].text);
    } else if (head == "rule") {
      // rule <LHS> -> <SYM>... : <weight> [@<switch>]
      if (toks.size() < 3 || toks[1].quoted)
        throw GrammarError("expected: rule <LHS> -> <SYM> ... : <weight>",
                           lineno, toks[0].column);
      RawRule r;
      r.lhs = toks[1].text;
      r.lineno = lineno;
      size_t i = 2;
      if (i >= toks.size() || toks[i].text != "->" || toks[i].quoted)
        throw GrammarError("expected '->' after rule lhs", lineno,
                           i < toks.size() ? toks[i].column : 0);
      ++i;
      while (i < toks.size() && (toks[i].quoted || toks[i].text != ":")) {
        r.rhs.push_back(toks[i]);
        ++i;
      }
      if (r.rhs.empty())
        throw GrammarError("rule has an empty right-hand side", lineno,
                           toks[1].column);
      if (i >= toks.size())
        throw GrammarError("expected ': <weight>' after rule rhs", lineno, 0);
      ++i;  // skip ':'
      if (i >= toks.size() || toks[i].quoted)
        throw GrammarError("expected a weight after ':'", lineno, 0);
      {
        const std::string& w = toks[i].text;
        double value = 0.0;
        auto [ptr, ec] =
            std::from_chars(w.data(), w.data() + w.size(), value);
        if (ec != std::errc() || ptr != w.data() + w.size())
          throw GrammarError("malformed weight '" + w + "'", lineno,
                             toks[i].column);
        if (!(value > 0.0))
          throw GrammarError("weight must be positive, got '" + w + "'",
                             lineno, toks[i].column);
        r.weight = value;
      }
      ++i;
      if (i < toks.size()) {
        const Token& t = toks[i];
        if (t.quoted || t.text.size() < 2 || t.text[0] != '@')
          throw GrammarError("expected '@<switch>' or end of line", lineno,
                             t.column);
        r.switch_name = t.text.substr(1);
        ++i;
      }
      if (i < toks.size())
        throw GrammarError("trailing tokens after rule", lineno,
                           toks[i].column);
      raw.push_back(std::move(r));
    } else {
      throw GrammarError("unknown directive '" + head + "'", lineno,
                         toks[0].column);
    }
  }

  if (start_name.empty()) throw GrammarError("missing start directive");
  if (raw.empty()) throw GrammarError("grammar defines no rules");

  Grammar g;
  for (const std::string& s : switch_names) g.add_switch(s);

  // LHS set determines which bare tokens are nonterminals.
  for (const RawRule& r : raw) g.add_symbol(r.lhs, SymbolKind::Nonterminal);
  if (g.find_symbol(start_name) < 0)
    throw GrammarError("start symbol '" + start_name + "' has no rules",
                       start_line);
  g.set_start(g.find_symbol(start_name));

  for (const RawRule& r : raw) {
    std::vector<SymbolId> rhs;
    rhs.reserve(r.rhs.size());
    for (const Token& t : r.rhs) {
      if (t.quoted) {
        SymbolId existing = g.find_symbol(t.text);
        if (existing >= 0 && !g.is_terminal(existing))
          throw GrammarError("'" + t.text +
                                 "' is quoted as a terminal but also "
                                 "appears as a rule lhs",
                             r.lineno, t.column);
        rhs.push_back(g.add_symbol(t.text, SymbolKind::Terminal));
      } else {
        SymbolId existing = g.find_symbol(t.text);
        rhs.push_back(existing >= 0
                          ? existing
                          : g.add_symbol(t.text, SymbolKind::Terminal));
      }
    }
    int sw = -1;
    if (!r.switch_name.empty()) {
      sw = g.find_switch(r.switch_name);
      if (sw < 0)
        throw GrammarError("rule tagged with undeclared switch '" +
                               r.switch_name + "'",
                           r.lineno);
    }
    g.add_rule(g.find_symbol(r.lhs), std::move(rhs), r.weight, sw);
  }
  return g;
}

Grammar parse_grammar(std::string_view text) {
  Grammar g = parse_grammar_unvalidated(text);
  std::vector<Diagnostic> diags = validate(g);
  if (!diags.empty()) {
    std::string msg = "invalid grammar:";
    for (const Diagnostic& d : diags)
      msg += "\n  [" + d.invariant + "] " +
             (d.subject.empty() ? "" : d.subject + ": ") + d.message;
    throw GrammarError(msg);
  }
  return g;
}

Grammar parse_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

namespace {

std::string format_weight(double w) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, ptr);
}

}  // namespace

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  if (g.start() >= 0) out << "start " << g.name(g.start()) << "\n";
  for (const std::string& s : g.switches()) out << "switch " << s << "\n";
  for (const Rule& r : g.rules()) {
    out << "rule " << g.name(r.lhs) << " ->";
    for (SymbolId s : r.rhs) {
      if (g.is_terminal(s))
        out << " \"" << g.name(s) << '"';
      else
        out << ' ' << g.name(s);
    }
    out << " : " << format_weight(r.weight);
    if (r.switch_index >= 0) out << " @" << g.switches()[r.switch_index];
    out << "\n";
  }
  return out.str();
}

bool equivalent(const Grammar& a, const Grammar& b) {
  return serialize_grammar(a) == serialize_grammar(b);
}

uint64_t grammar_hash(const Grammar& g) {
  std::string s = serialize_grammar(g);
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::vector<double> normalized_weights(const Grammar& g, SymbolId lhs) {
  std::span<const RuleId> ids = g.rules_for(lhs);
  std::vector<double> w;
  w.reserve(ids.size());
  double total = 0.0;
  for (RuleId id : ids) total += g.rule(id).weight;
  for (RuleId id : ids) w.push_back(g.rule(id).weight / total);
  return w;
}

}  // namespace artlang
