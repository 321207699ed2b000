#include <sstream>

#include "artlang/grammar.hpp"
#include "artlang/lexicon.hpp"

namespace artlang {

// Clause skeleton. Number agreement rides on the _sg/_pl subscripts: a
// subject NP and its VP share a subscript, and relative-clause VPs share
// the head noun's. The six switches each reverse one rule family; particle
// attachment (Subj/Obj) is deliberately untagged so case markers stay
// postnominal in every configuration. ROOT exists so the sentence-final
// period sits outside every switchable rule.
std::string base_grammar_skeleton() {
  return R"(# clause structure
start ROOT
switch S
switch VP
switch Comp
switch PP
switch NP
switch Rel

rule ROOT -> S "." : 1

rule S -> NPSubj_sg VP_sg : 0.5 @S
rule S -> NPSubj_pl VP_pl : 0.5 @S

rule NPSubj_sg -> NP_sg Subj : 1
rule NPSubj_pl -> NP_pl Subj : 1
rule NPObj -> NP_sg Obj : 0.5
rule NPObj -> NP_pl Obj : 0.5

rule VP_sg -> Verb_sg : 0.45
rule VP_sg -> NPObj Verb_sg : 0.35 @VP
rule VP_sg -> SComp Verb_sg : 0.2 @VP
rule VP_pl -> Verb_pl : 0.45
rule VP_pl -> NPObj Verb_pl : 0.35 @VP
rule VP_pl -> SComp Verb_pl : 0.2 @VP

rule SComp -> S Comp : 1 @Comp

rule NP_sg -> Noun_sg : 0.42
rule NP_sg -> Pronoun_sg : 0.08
rule NP_sg -> Adj NP_sg : 0.2 @NP
rule NP_sg -> PP NP_sg : 0.15 @PP
rule NP_sg -> VP_sg Rel Noun_sg : 0.15 @Rel
rule NP_pl -> Noun_pl : 0.42
rule NP_pl -> Pronoun_pl : 0.08
rule NP_pl -> Adj NP_pl : 0.2 @NP
rule NP_pl -> PP NP_pl : 0.15 @PP
rule NP_pl -> VP_pl Rel Noun_pl : 0.15 @Rel

rule PP -> NP_sg Prep : 0.5 @PP
rule PP -> NP_pl Prep : 0.5 @PP

rule Verb_sg -> VerbPres_sg : 0.5
rule Verb_sg -> VerbPast_sg : 0.5
rule Verb_pl -> VerbPres_pl : 0.5
rule Verb_pl -> VerbPast_pl : 0.5
)";
}

namespace {

void emit_rule(std::ostringstream& out, const char* lhs,
               const std::string& surface) {
  out << "rule " << lhs << " -> \"" << surface << "\" : 1\n";
}

}  // namespace

std::string base_grammar_text(const Lexicon& lex) {
  std::ostringstream out;
  out << base_grammar_skeleton();
  out << "\n# particles\n";
  emit_rule(out, "Subj", lex.particle(ParticleRole::SubjectMarker));
  emit_rule(out, "Obj", lex.particle(ParticleRole::ObjectMarker));
  emit_rule(out, "Rel", lex.particle(ParticleRole::Relativizer));
  emit_rule(out, "Comp", lex.particle(ParticleRole::Complementizer));

  out << "\n# vocabulary\n";
  FeatureBundle sg{Number::Sg, Tense::None};
  FeatureBundle pl{Number::Pl, Tense::None};
  for (const LexEntry* e : lex.entries_with_pos(Pos::Noun)) {
    emit_rule(out, "Noun_sg", *e->form(sg));
    emit_rule(out, "Noun_pl", *e->form(pl));
  }
  for (const LexEntry* e : lex.entries_with_pos(Pos::Verb)) {
    emit_rule(out, "VerbPres_sg", *e->form({Number::Sg, Tense::Present}));
    emit_rule(out, "VerbPres_pl", *e->form({Number::Pl, Tense::Present}));
    emit_rule(out, "VerbPast_sg", *e->form({Number::Sg, Tense::Past}));
    emit_rule(out, "VerbPast_pl", *e->form({Number::Pl, Tense::Past}));
  }
  for (const LexEntry* e : lex.entries_with_pos(Pos::Pronoun)) {
    const char* lhs =
        e->forms[0].first.number == Number::Sg ? "Pronoun_sg" : "Pronoun_pl";
    emit_rule(out, lhs, e->forms[0].second);
  }
  for (const LexEntry* e : lex.entries_with_pos(Pos::Adjective))
    emit_rule(out, "Adj", e->forms[0].second);
  for (const LexEntry* e : lex.entries_with_pos(Pos::Preposition))
    emit_rule(out, "Prep", e->forms[0].second);
  return out.str();
}

Grammar base_grammar(const Lexicon& lex) {
  return parse_grammar(base_grammar_text(lex));
}

Grammar base_grammar() { return base_grammar(builtin_lexicon()); }

}  // namespace artlang
