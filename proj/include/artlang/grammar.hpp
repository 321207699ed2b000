#ifndef ARTLANG_GRAMMAR_HPP
#define ARTLANG_GRAMMAR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace artlang {

class Lexicon;

using SymbolId = int32_t;
using RuleId = int32_t;

enum class SymbolKind { Terminal, Nonterminal };

struct Symbol {
  std::string name;
  SymbolKind kind;
};

// A production LHS -> rhs[0] rhs[1] ... with a positive (possibly
// unnormalized) weight. switch_index >= 0 marks the rule as reversible:
// turning that switch on reverses the rhs order at linearization time.
struct Rule {
  RuleId id = -1;
  SymbolId lhs = -1;
  std::vector<SymbolId> rhs;
  double weight = 1.0;
  int switch_index = -1;
};

struct GrammarError : std::runtime_error {
  GrammarError(const std::string& msg, int line = 0, int column = 0)
      : std::runtime_error(msg), line(line), column(column) {}
  int line;
  int column;
};

// One violated invariant, e.g. {"dead nonterminal", "PP", "..."}.
struct Diagnostic {
  std::string invariant;
  std::string subject;
  std::string message;
};

// Switch-annotated weighted CFG. Construction never validates; call
// validate() and require an empty diagnostic list before sampling.
// Immutable in practice once validated (nothing mutates it afterwards),
// so it can be shared freely across workers.
class Grammar {
 public:
  // Returns the existing id when the name is already present with the same
  // kind; throws GrammarError on a kind conflict.
  SymbolId add_symbol(std::string_view name, SymbolKind kind);
  SymbolId find_symbol(std::string_view name) const;  // -1 if absent

  // Declaration order defines switch bit positions (bit 0 = first switch).
  int add_switch(std::string_view name);
  int find_switch(std::string_view name) const;  // -1 if absent

  RuleId add_rule(SymbolId lhs, std::vector<SymbolId> rhs, double weight,
                  int switch_index = -1);
  void set_start(SymbolId s) { start_ = s; }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<std::string>& switches() const { return switches_; }
  SymbolId start() const { return start_; }
  int num_switches() const { return static_cast<int>(switches_.size()); }

  const Symbol& symbol(SymbolId id) const { return symbols_[id]; }
  const std::string& name(SymbolId id) const { return symbols_[id].name; }
  bool is_terminal(SymbolId id) const {
    return symbols_[id].kind == SymbolKind::Terminal;
  }
  const Rule& rule(RuleId id) const { return rules_[id]; }

  // Rule ids with the given lhs, in id order.
  std::span<const RuleId> rules_for(SymbolId lhs) const;

  // Rule ids tagged with switch s.
  std::vector<RuleId> rule_group(int switch_index) const;

 private:
  std::vector<Symbol> symbols_;
  std::vector<Rule> rules_;
  std::vector<std::string> switches_;
  SymbolId start_ = -1;
  std::unordered_map<std::string, SymbolId> symbol_index_;
  std::unordered_map<std::string, int> switch_index_;
  mutable std::unordered_map<SymbolId, std::vector<RuleId>> by_lhs_;
  mutable bool by_lhs_stale_ = true;
};

// Empty iff all Grammar invariants hold: start is a defined nonterminal,
// no dead nonterminals (rhs nonterminal with no rules), all weights > 0,
// no empty rhs, no switch tag on a unary rule, every tag refers to a
// declared switch, every declared switch tags at least one rule.
std::vector<Diagnostic> validate(const Grammar& g);

// Parses the line-oriented grammar file format:
//
//   # comment
//   start <NT>
//   switch <name>                     (one per line; order = bit order)
//   rule <LHS> -> <SYM> ... : <weight> [@<switch>]
//
// A bare rhs token is a nonterminal if it appears as some rule's LHS and a
// terminal otherwise; "quoted" tokens are always terminals. Throws
// GrammarError (with line/column for syntax errors); the returned grammar
// always passes validate().
Grammar parse_grammar(std::string_view text);
Grammar parse_grammar_file(const std::string& path);

// Syntax-only variant: stops after parsing, so the result may fail
// validate(). This is what diagnostic frontends want; everything that
// samples or scores should go through parse_grammar().
Grammar parse_grammar_unvalidated(std::string_view text);

// Canonical text form; parse_grammar(serialize_grammar(g)) reproduces g up
// to rule id renumbering. Terminals are quoted, weights are shortest
// round-trip decimals.
std::string serialize_grammar(const Grammar& g);

// True when the two grammars are equal up to rule id renumbering.
bool equivalent(const Grammar& a, const Grammar& b);

// FNV-1a of the canonical serialization; used in corpus manifests.
uint64_t grammar_hash(const Grammar& g);

// Normalized rule probabilities for one lhs (parallel to rules_for(lhs)).
std::vector<double> normalized_weights(const Grammar& g, SymbolId lhs);

// The shipped base grammar: clause structure with number agreement via
// sg/pl-subscripted nonterminals and six switch groups (S, VP, Comp, PP,
// NP, Rel), with terminal rules drawn from the lexicon. The full grammar,
// weights included, is expressed in the grammar file format; see
// base_grammar_text().
Grammar base_grammar();
Grammar base_grammar(const Lexicon& lex);
std::string base_grammar_text(const Lexicon& lex);

// Structural half of the base grammar file (everything except the
// lexicon-derived terminal rules).
std::string base_grammar_skeleton();

}  // namespace artlang

#endif  // ARTLANG_GRAMMAR_HPP
